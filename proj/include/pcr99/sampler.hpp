#pragma once

#include <optional>

#include "pcr99/geometry.hpp"
#include "pcr99/scale_consistency.hpp"

namespace pcr99 {

/// A 3-point sample: ascending ranking numbers (1-based) and the
/// correspondence indices they map back to.
struct RankTriplet {
  int rank_i, rank_j, rank_k;  // rank_i < rank_j < rank_k
  int i, j, k;                 // correspondence indices
};

/// Emits every 3-combination of ranking numbers exactly once, ordered by
/// ascending rank sum (ties: ascending rank_i, then rank_j). Samples whose
/// members rank well are therefore visited first.
///
/// For a target sum the loop windows are
///   rank_i in [max(1, sum - 2n + 1), floor((sum - 3) / 3)]
///   rank_j in [max(rank_i + 1, sum - rank_i - n), floor((sum - rank_i - 1) / 2)]
///   rank_k = sum - rank_i - rank_j,
/// which follow from 1 <= rank_i < rank_j < rank_k <= n. Each triplet appears
/// in exactly one window, so no visited-set is needed and the cursor state is
/// O(1); at n = 1000 the full sequence is ~1.7e8 triplets and is never
/// materialized.
class TripletEnumerator {
 public:
  /// The ranking must outlive the enumerator.
  explicit TripletEnumerator(const Ranking& ranking);

  /// Next triplet in canonical order; nullopt once all C(n,3) are emitted.
  std::optional<RankTriplet> next();

 private:
  bool seek();

  const Ranking* ranking_;
  long long n_;
  long long rank_sum_;
  long long rank_i_;
  long long rank_j_;
  bool done_;
};

/// Triplet scale consistency, unknown scale: the three pairwise log ratios
/// must agree within epsilon. Necessary for an all-inlier sample; evaluated
/// from the precomputed matrix only, no transform required. Any sentinel
/// entry fails. Symmetric in (i, j, k).
bool prescreen_unknown_scale(const LogRatioMatrix& log_ratio, int i, int j, int k,
                             double epsilon);

/// Known-scale variant: each of the three log ratios must lie within epsilon
/// of the given log scale.
bool prescreen_known_scale(const LogRatioMatrix& log_ratio, int i, int j, int k,
                           double log_scale, double epsilon);

/// Direct ratio-difference consistency test: all twelve pairwise differences
/// of side-length ratios (both orientations and both within-cloud forms)
/// must stay below delta. Slower than the log-ratio prescreen and not
/// exactly equivalent to it; kept as an independent cross-check.
/// Throws CoincidentPointsError when a required distance vanishes.
bool prescreen_ratio_test(const CorrespondenceSet& corr, int i, int j, int k, double delta);

}  // namespace pcr99
