#include "pcr99/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pcr99 {

CorrespondenceSet::CorrespondenceSet(std::vector<Point3> source_points,
                                     std::vector<Point3> target_points)
    : source(std::move(source_points)), target(std::move(target_points)) {
  if (source.size() != target.size())
    throw std::invalid_argument("correspondence lists differ in length");
  if (source.size() < 3)
    throw std::invalid_argument("need at least 3 correspondences");
}

bool SimilarityTransform::is_valid() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) return false;
  if (!rotation.allFinite() || !translation.allFinite()) return false;
  const Eigen::Matrix3d gram = rotation.transpose() * rotation;
  if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-9) return false;
  return std::abs(rotation.determinant() - 1.0) <= 1e-9;
}

namespace {

// Maximal-eigenvector quaternion solution for the rotation best aligning
// centered source points onto centered target points, given their 3x3
// cross-covariance sum source' * target'^T. Always a proper rotation.
Eigen::Matrix3d optimal_rotation(const Eigen::Matrix3d& cov) {
  const double sxx = cov(0, 0), sxy = cov(0, 1), sxz = cov(0, 2);
  const double syx = cov(1, 0), syy = cov(1, 1), syz = cov(1, 2);
  const double szx = cov(2, 0), szy = cov(2, 1), szz = cov(2, 2);

  Eigen::Matrix4d quad;
  quad << sxx + syy + szz, syz - szy, szx - sxz, sxy - syx,
      syz - szy, sxx - syy - szz, sxy + syx, szx + sxz,
      szx - sxz, sxy + syx, -sxx + syy - szz, syz + szy,
      sxy - syx, szx + sxz, syz + szy, -sxx - syy + szz;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(quad);
  const Eigen::Vector4d q = eig.eigenvectors().col(3);  // eigenvalues ascending
  return Eigen::Quaterniond(q(0), q(1), q(2), q(3)).normalized().toRotationMatrix();
}

}  // namespace

std::optional<SimilarityTransform> fit_similarity(const CorrespondenceSet& corr,
                                                  std::span<const int> indices,
                                                  std::optional<double> fixed_scale) {
  const auto count = static_cast<double>(indices.size());
  if (indices.size() < 3) return std::nullopt;

  Eigen::Vector3d centroid_src = Eigen::Vector3d::Zero();
  Eigen::Vector3d centroid_tgt = Eigen::Vector3d::Zero();
  for (int idx : indices) {
    centroid_src += corr.source[idx];
    centroid_tgt += corr.target[idx];
  }
  centroid_src /= count;
  centroid_tgt /= count;

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  double src_sq_sum = 0.0;
  for (int idx : indices) {
    const Eigen::Vector3d s = corr.source[idx] - centroid_src;
    const Eigen::Vector3d t = corr.target[idx] - centroid_tgt;
    cov.noalias() += s * t.transpose();
    src_sq_sum += s.squaredNorm();
  }

  // Rank < 2 cannot pin down a rotation (collinear or coincident sample).
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov);
  const Eigen::Vector3d& sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(1) < 1e-12 * sv(0)) return std::nullopt;

  SimilarityTransform result;
  result.rotation = optimal_rotation(cov);

  if (fixed_scale) {
    result.scale = *fixed_scale;
  } else {
    double dot_sum = 0.0;
    for (int idx : indices) {
      const Eigen::Vector3d s = corr.source[idx] - centroid_src;
      const Eigen::Vector3d t = corr.target[idx] - centroid_tgt;
      dot_sum += t.dot(result.rotation * s);
    }
    result.scale = dot_sum / src_sq_sum;
    if (!(result.scale > 0.0) || !std::isfinite(result.scale)) return std::nullopt;
  }

  result.translation = centroid_tgt - result.scale * (result.rotation * centroid_src);
  return result;
}

double residual(const SimilarityTransform& transform, const CorrespondenceSet& corr, int i) {
  return (transform.apply(corr.source[i]) - corr.target[i]).norm();
}

double rotation_error_deg(const Eigen::Matrix3d& rotation_a, const Eigen::Matrix3d& rotation_b) {
  const double trace = (rotation_a * rotation_b.transpose()).trace();
  const double arg = std::clamp((trace - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(arg) * 180.0 / std::numbers::pi;
}

}  // namespace pcr99
