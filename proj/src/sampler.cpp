#include "pcr99/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "pcr99/errors.hpp"

namespace pcr99 {

TripletEnumerator::TripletEnumerator(const Ranking& ranking)
    : ranking_(&ranking),
      n_(static_cast<long long>(ranking.order.size())),
      rank_sum_(6),
      rank_i_(1),
      rank_j_(0),
      done_(n_ < 3) {}

// Move the cursor to the next valid (rank_i_, rank_j_) at or after the
// current position, bumping rank_sum_ past exhausted windows. Windows can be
// empty near the extremes of the sum range; those are skipped silently.
bool TripletEnumerator::seek() {
  while (rank_sum_ <= 3 * n_ - 3) {
    const long long rank_i_hi = (rank_sum_ - 3) / 3;
    while (rank_i_ <= rank_i_hi) {
      const long long rank_j_lo = std::max(rank_i_ + 1, rank_sum_ - rank_i_ - n_);
      const long long rank_j_hi = (rank_sum_ - rank_i_ - 1) / 2;
      if (rank_j_ < rank_j_lo) rank_j_ = rank_j_lo;
      if (rank_j_ <= rank_j_hi) return true;
      ++rank_i_;
      rank_j_ = 0;
    }
    ++rank_sum_;
    rank_i_ = std::max(1LL, rank_sum_ - 2 * n_ + 1);
    rank_j_ = 0;
  }
  return false;
}

std::optional<RankTriplet> TripletEnumerator::next() {
  if (done_) return std::nullopt;
  if (!seek()) {
    done_ = true;
    return std::nullopt;
  }
  const long long rank_k = rank_sum_ - rank_i_ - rank_j_;
  RankTriplet triplet;
  triplet.rank_i = static_cast<int>(rank_i_);
  triplet.rank_j = static_cast<int>(rank_j_);
  triplet.rank_k = static_cast<int>(rank_k);
  triplet.i = ranking_->order[triplet.rank_i - 1];
  triplet.j = ranking_->order[triplet.rank_j - 1];
  triplet.k = ranking_->order[triplet.rank_k - 1];
  ++rank_j_;
  return triplet;
}

bool prescreen_unknown_scale(const LogRatioMatrix& log_ratio, int i, int j, int k,
                             double epsilon) {
  const double l_ij = log_ratio(i, j);
  const double l_jk = log_ratio(j, k);
  const double l_ki = log_ratio(k, i);
  // NaN-safe: any sentinel makes a comparison false.
  return std::abs(l_ij - l_jk) < epsilon && std::abs(l_jk - l_ki) < epsilon &&
         std::abs(l_ij - l_ki) < epsilon;
}

bool prescreen_known_scale(const LogRatioMatrix& log_ratio, int i, int j, int k,
                           double log_scale, double epsilon) {
  return std::abs(log_ratio(i, j) - log_scale) < epsilon &&
         std::abs(log_ratio(j, k) - log_scale) < epsilon &&
         std::abs(log_ratio(k, i) - log_scale) < epsilon;
}

bool prescreen_ratio_test(const CorrespondenceSet& corr, int i, int j, int k, double delta) {
  const double a_ij = (corr.source[i] - corr.source[j]).norm();
  const double a_jk = (corr.source[j] - corr.source[k]).norm();
  const double a_ki = (corr.source[k] - corr.source[i]).norm();
  const double b_ij = (corr.target[i] - corr.target[j]).norm();
  const double b_jk = (corr.target[j] - corr.target[k]).norm();
  const double b_ki = (corr.target[k] - corr.target[i]).norm();
  if (a_ij == 0.0 || a_jk == 0.0 || a_ki == 0.0 || b_ij == 0.0 || b_jk == 0.0 || b_ki == 0.0)
    throw CoincidentPointsError("coincident points in ratio test");

  const auto close = [delta](double x, double y) { return std::abs(x - y) < delta; };
  // Source-over-target ratios pairwise...
  if (!close(a_ij / b_ij, a_jk / b_jk) || !close(a_jk / b_jk, a_ki / b_ki) ||
      !close(a_ij / b_ij, a_ki / b_ki))
    return false;
  // ...target-over-source...
  if (!close(b_ij / a_ij, b_jk / a_jk) || !close(b_jk / a_jk, b_ki / a_ki) ||
      !close(b_ij / a_ij, b_ki / a_ki))
    return false;
  // ...and within-cloud side ratios, both orientations.
  if (!close(a_ij / a_jk, b_ij / b_jk) || !close(a_jk / a_ki, b_jk / b_ki) ||
      !close(a_ij / a_ki, b_ij / b_ki))
    return false;
  if (!close(a_jk / a_ij, b_jk / b_ij) || !close(a_ki / a_jk, b_ki / b_jk) ||
      !close(a_ki / a_ij, b_ki / b_ij))
    return false;
  return true;
}

}  // namespace pcr99
