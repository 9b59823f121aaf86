#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pcr99/geometry.hpp"

namespace pcr99 {

enum class SamplingMode { kOrdered, kRandom };

struct SolverConfig {
  /// Log-ratio consistency threshold shared by scoring and prescreening.
  double epsilon = 0.1;
  /// Target-frame residual bound for consensus membership.
  double inlier_threshold = 0.1;
  /// Hypotheses between stopping checks; the stopping rule is evaluated only
  /// when hypotheses_tested is a multiple of this.
  std::int64_t batch = 1000;
  /// Stop once the best consensus reaches max(floor, fraction * n).
  std::int64_t min_inlier_floor = 9;
  double min_inlier_fraction = 0.009;
  /// Hypothesis budget; 0 means C(n,3).
  std::int64_t max_hypotheses = 0;
  /// Soft wall-clock cap, checked at batch boundaries only.
  std::optional<double> time_budget_s;
  SamplingMode sampling = SamplingMode::kOrdered;
  /// Seeds the generator behind kRandom; ignored by kOrdered.
  std::uint64_t sampling_seed = 0;
};

struct RegistrationResult {
  SimilarityTransform transform;
  /// Consensus of the returned transform (ascending indices).
  std::vector<int> inliers;
  std::int64_t hypotheses_tested = 0;
  std::int64_t prescreen_rejections = 0;
  std::int64_t samples_drawn = 0;
  bool converged = false;
  double elapsed_seconds = 0.0;
};

/// Indices whose residual under the transform is at most inlier_threshold.
std::vector<int> consensus(const SimilarityTransform& transform, const CorrespondenceSet& corr,
                           double inlier_threshold);

/// Full unknown-scale pipeline: build the log-ratio matrix, score and rank
/// the correspondences, walk 3-point samples in rank-sum order, prescreen
/// each for triplet scale consistency, fit surviving samples in closed form
/// and track the largest consensus. At every batch boundary the stopping rule
/// is checked; on success the transform is refit on the full consensus.
///
/// If sampling (or the budgets) are exhausted first, the best-so-far refit is
/// returned with converged = false. Throws InsufficientInliersError when not
/// even 3 consistent correspondences were ever found.
///
/// With SamplingMode::kRandom the scoring/ordering stage is skipped and
/// triplets are drawn uniformly (duplicates possible); to guarantee
/// termination without budgets, samples_drawn is capped at 100 * C(n,3).
RegistrationResult register_unknown_scale(const CorrespondenceSet& corr,
                                          const SolverConfig& config = {});

/// Known-scale variant: scoring and prescreening compare log ratios against
/// ln(scale) directly and every fit keeps the given scale.
RegistrationResult register_known_scale(const CorrespondenceSet& corr, double scale,
                                        const SolverConfig& config = {});

/// The same pipeline with uniform random sampling (ablation baseline).
/// Dispatches to the known-scale path when a scale is given.
RegistrationResult register_random_baseline(const CorrespondenceSet& corr,
                                            const SolverConfig& config,
                                            std::optional<double> scale = std::nullopt);

}  // namespace pcr99
