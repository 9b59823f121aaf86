#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcr99/geometry.hpp"
#include "pcr99/solver.hpp"

namespace pcr99 {

/// Synthetic registration scene: a source cloud inside the unit cube, a
/// random similarity transform, isotropic Gaussian noise on the target side,
/// and a fraction of targets replaced by uniform points inside a sphere whose
/// diameter is the transformed cube diagonal (sqrt(3) * scale), centered at
/// the transformed cloud's centroid. Fully determined by the seed.
struct SceneSpec {
  int n = 1000;
  double outlier_ratio = 0.0;  // in [0, 0.99]
  double noise_sigma = 0.01;
  double scale_min = 1.0;
  double scale_max = 5.0;
  std::uint64_t seed = 0;
  /// Point file to use as the source cloud (rescaled to fit the unit cube);
  /// uniform cube samples when absent.
  std::optional<std::string> cloud_path;

  int outlier_count() const { return static_cast<int>(std::llround(outlier_ratio * n)); }
};

struct GroundTruth {
  SimilarityTransform transform;
  std::vector<std::uint8_t> inlier_mask;  // 1 = inlier

  int inlier_count() const;
};

/// Throws BadSpecError when the spec is invalid or leaves fewer than 3 inliers.
std::pair<CorrespondenceSet, GroundTruth> generate_scene(const SceneSpec& spec);

struct TrialRecord {
  double outlier_ratio = 0.0;
  std::uint64_t seed = 0;
  double rotation_error_deg = 0.0;
  double translation_error = 0.0;
  double scale_error_relative = 0.0;
  double elapsed_seconds = 0.0;
  std::int64_t hypotheses_tested = 0;
  bool converged = false;
};

/// Error values recorded when a trial ends with no transform at all.
inline constexpr double kTrialRotationSentinelDeg = 180.0;
inline constexpr double kTrialErrorSentinel = 1e9;

struct SweepOptions {
  std::vector<double> ratios;
  int trials_per_ratio = 50;
  /// Engages the known-scale solver and fixes the scene scale to this value.
  std::optional<double> known_scale;
  /// Worker threads; records do not depend on this.
  int jobs = 1;
  /// Capture wall-clock time per trial. Off by default so records (and the
  /// CSV) are bit-reproducible across runs; when off, elapsed is 0.
  bool record_timing = false;
};

/// One record per (ratio, trial), in that nesting order. The per-trial seed
/// mixes the base seed with the ratio and trial indices, so extending the
/// sweep never changes existing records. Solver failures become records with
/// converged = false and sentinel errors.
std::vector<TrialRecord> run_trials(const SceneSpec& base, const SweepOptions& sweep,
                                    const SolverConfig& config);

struct SummaryRow {
  double outlier_ratio = 0.0;
  int trials = 0;
  int converged = 0;
  int rot_err_over_5deg = 0;
  int rot_err_over_10deg = 0;
  double median_rot_err_deg = 0.0;
  double mean_rot_err_deg = 0.0;
  double median_elapsed_s = 0.0;
  double median_hypotheses = 0.0;
};

/// Per-ratio failure counts and medians (lower median for even counts),
/// insensitive to record order.
std::vector<SummaryRow> aggregate(const std::vector<TrialRecord>& records);

/// CSV with header ratio,seed,rot_err_deg,trans_err,scale_err_rel,elapsed_s,
/// hypotheses,converged; rows ordered (ratio asc, trial asc); '.' decimal
/// separator regardless of locale.
std::string to_csv(std::vector<TrialRecord> records);

void write_csv(const std::vector<TrialRecord>& records, const std::string& path);

}  // namespace pcr99
