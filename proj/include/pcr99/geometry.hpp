#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <vector>

namespace pcr99 {

using Point3 = Eigen::Vector3d;

/// Paired 3D point lists: source[i] is putatively matched to target[i].
/// Matches come from an upstream matcher and may be wrong (outliers).
struct CorrespondenceSet {
  std::vector<Point3> source;
  std::vector<Point3> target;

  CorrespondenceSet() = default;

  /// Throws std::invalid_argument on length mismatch or fewer than 3 pairs.
  CorrespondenceSet(std::vector<Point3> source_points, std::vector<Point3> target_points);

  int size() const { return static_cast<int>(source.size()); }
};

/// p -> scale * rotation * p + translation, with scale > 0 and rotation a
/// proper rotation matrix.
struct SimilarityTransform {
  double scale = 1.0;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Point3 apply(const Point3& p) const { return scale * (rotation * p) + translation; }

  /// scale > 0, rotation orthonormal within 1e-9 per entry, det within 1e-9 of +1.
  bool is_valid() const;
};

/// Closed-form least-squares fit of sum_i ||s*R*source[i] + t - target[i]||^2
/// over the selected correspondences (Horn's absolute orientation: the optimal
/// rotation comes from the maximal eigenvector of the 4x4 quaternion matrix of
/// the centered cross-covariance).
///
/// With fixed_scale set, s is not estimated and the fit reduces to a rigid
/// alignment at that scale. Otherwise s is the exact minimizer
/// sum(target' . R*source') / sum(||source'||^2) over centered points.
///
/// Returns nullopt for degenerate samples (selected points collinear or
/// coincident: cross-covariance rank < 2); callers discard such samples.
std::optional<SimilarityTransform> fit_similarity(
    const CorrespondenceSet& corr, std::span<const int> indices,
    std::optional<double> fixed_scale = std::nullopt);

/// Euclidean mismatch in the target frame: ||s*R*source[i] + t - target[i]||.
double residual(const SimilarityTransform& transform, const CorrespondenceSet& corr, int i);

/// Geodesic rotation distance in degrees, in [0, 180].
double rotation_error_deg(const Eigen::Matrix3d& rotation_a, const Eigen::Matrix3d& rotation_b);

}  // namespace pcr99
