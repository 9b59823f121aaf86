#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "pcr99/geometry.hpp"

namespace pcr99 {

/// Truncation threshold shared by the score functions and the triplet
/// prescreens.
inline constexpr double kDefaultEpsilon = 0.1;

/// Pairs whose distance vanishes on either side get this sentinel; it fails
/// every epsilon comparison and contributes the full truncation cost.
inline constexpr double kLogRatioSentinel = std::numeric_limits<double>::infinity();

/// Symmetric n x n matrix of pairwise log distance ratios:
/// entry(i,j) = ln(||target_i - target_j|| / ||source_i - source_j||).
/// For an inlier pair both distances scale by the true s, so the entry is
/// ln(s) up to noise. The diagonal is 0 and never read. Each unordered pair
/// is computed once and mirrored, so the matrix equals its transpose bitwise.
struct LogRatioMatrix {
  Eigen::MatrixXd entries;
  std::int64_t coincident_pairs = 0;  // sentinel entries per unordered pair

  int size() const { return static_cast<int>(entries.rows()); }
  double operator()(int i, int j) const { return entries(i, j); }

  /// Wrap an explicit matrix (tests and tooling).
  static LogRatioMatrix from_entries(Eigen::MatrixXd m);
};

LogRatioMatrix build_log_ratio(const CorrespondenceSet& corr);

/// Arithmetic sequence of candidate log-scale values covering one row's
/// finite entries, with step near 0.1 (exactly the row span divided by the
/// nearest integer number of 0.1-steps, at least one).
struct CandidateGrid {
  std::vector<double> values;
};

/// nullopt when row i has no finite off-diagonal entry.
std::optional<CandidateGrid> candidate_grid(const LogRatioMatrix& log_ratio, int i);

/// Score S(i) = -sum_{j != i} min(|L(i,j) - log_scale|, epsilon).
/// High (near 0) when row i concentrates near the given log scale; bounded
/// below by -(n-1)*epsilon. Sentinel entries contribute exactly epsilon.
std::vector<double> score_known_scale(const LogRatioMatrix& log_ratio, double log_scale,
                                      double epsilon);

/// Unknown-scale score: for each row, the best known-scale score over that
/// row's candidate grid (exact grid maximization, no continuous search).
/// Rows with no finite entry score -(n-1)*epsilon.
std::vector<double> score_unknown_scale(const LogRatioMatrix& log_ratio, double epsilon);

/// Descending-score ordering. order[k] is the index holding rank k+1;
/// rank_of[i] is the 1-based ranking number of index i (1 = best). Ties
/// break by ascending index so downstream sampling is fully deterministic.
struct Ranking {
  std::vector<double> scores;
  std::vector<int> order;
  std::vector<int> rank_of;
};

Ranking rank_scores(std::vector<double> scores);

}  // namespace pcr99
