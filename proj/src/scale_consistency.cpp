#include "pcr99/scale_consistency.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pcr99 {

namespace {

constexpr double kGridStepTarget = 0.1;

// One row of the matrix, prepared for fast truncated-L1 evaluation: finite
// off-diagonal entries sorted with prefix sums. The cost at a query g is
//   sum_j min(|v_j - g|, eps) + sentinels * eps,
// computed by splitting the sorted values at g-eps, g and g+eps. Entries
// outside the window contribute eps; inside, the two one-sided sums come from
// the prefix table.
struct SortedRow {
  std::vector<double> values;
  std::vector<double> prefix;
  int sentinels = 0;

  void build(const LogRatioMatrix& log_ratio, int row) {
    const int n = log_ratio.size();
    values.clear();
    sentinels = 0;
    values.reserve(n - 1);
    for (int j = 0; j < n; ++j) {
      if (j == row) continue;
      const double v = log_ratio(row, j);
      if (std::isfinite(v))
        values.push_back(v);
      else
        ++sentinels;
    }
    std::sort(values.begin(), values.end());
    prefix.resize(values.size() + 1);
    prefix[0] = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) prefix[k + 1] = prefix[k] + values[k];
  }

  double cost(double g, double eps) const {
    const auto lo = std::lower_bound(values.begin(), values.end(), g - eps);
    const auto hi = std::upper_bound(lo, values.end(), g + eps);
    const auto mid = std::lower_bound(lo, hi, g);
    const auto i_lo = static_cast<std::size_t>(lo - values.begin());
    const auto i_mid = static_cast<std::size_t>(mid - values.begin());
    const auto i_hi = static_cast<std::size_t>(hi - values.begin());
    const double outside =
        static_cast<double>(values.size() - (i_hi - i_lo) + static_cast<std::size_t>(sentinels)) *
        eps;
    const double below = static_cast<double>(i_mid - i_lo) * g - (prefix[i_mid] - prefix[i_lo]);
    const double above = (prefix[i_hi] - prefix[i_mid]) - static_cast<double>(i_hi - i_mid) * g;
    return outside + below + above;
  }
};

}  // namespace

LogRatioMatrix LogRatioMatrix::from_entries(Eigen::MatrixXd m) {
  LogRatioMatrix out;
  out.entries = std::move(m);
  return out;
}

LogRatioMatrix build_log_ratio(const CorrespondenceSet& corr) {
  const int n = corr.size();
  LogRatioMatrix out;
  out.entries = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double source_dist = (corr.source[i] - corr.source[j]).norm();
      const double target_dist = (corr.target[i] - corr.target[j]).norm();
      double value;
      if (source_dist == 0.0 || target_dist == 0.0) {
        value = kLogRatioSentinel;
        ++out.coincident_pairs;
      } else {
        value = std::log(target_dist / source_dist);
      }
      out.entries(i, j) = value;
      out.entries(j, i) = value;
    }
  }
  return out;
}

std::optional<CandidateGrid> candidate_grid(const LogRatioMatrix& log_ratio, int i) {
  const int n = log_ratio.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    const double v = log_ratio(i, j);
    if (!std::isfinite(v)) continue;
    any = true;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!any) return std::nullopt;

  CandidateGrid grid;
  if (lo == hi) {
    grid.values = {lo};
    return grid;
  }
  // Nearest integer, halves away from zero; at least one step.
  const double steps = std::max(1.0, std::round((hi - lo) / kGridStepTarget));
  const int step_count = static_cast<int>(steps);
  const double delta = (hi - lo) / steps;
  grid.values.reserve(step_count + 1);
  for (int k = 0; k <= step_count; ++k) grid.values.push_back(lo + k * delta);
  return grid;
}

std::vector<double> score_known_scale(const LogRatioMatrix& log_ratio, double log_scale,
                                      double epsilon) {
  const int n = log_ratio.size();
  std::vector<double> scores(n);
  SortedRow row;
  for (int i = 0; i < n; ++i) {
    row.build(log_ratio, i);
    scores[i] = -row.cost(log_scale, epsilon);
  }
  return scores;
}

std::vector<double> score_unknown_scale(const LogRatioMatrix& log_ratio, double epsilon) {
  const int n = log_ratio.size();
  std::vector<double> scores(n);
  SortedRow row;
  for (int i = 0; i < n; ++i) {
    const auto grid = candidate_grid(log_ratio, i);
    if (!grid) {
      scores[i] = -(n - 1) * epsilon;
      continue;
    }
    row.build(log_ratio, i);
    double best = std::numeric_limits<double>::infinity();
    for (double g : grid->values) best = std::min(best, row.cost(g, epsilon));
    scores[i] = -best;
  }
  return scores;
}

Ranking rank_scores(std::vector<double> scores) {
  const int n = static_cast<int>(scores.size());
  Ranking ranking;
  ranking.scores = std::move(scores);
  ranking.order.resize(n);
  std::iota(ranking.order.begin(), ranking.order.end(), 0);
  std::stable_sort(ranking.order.begin(), ranking.order.end(),
                   [&](int a, int b) { return ranking.scores[a] > ranking.scores[b]; });
  ranking.rank_of.resize(n);
  for (int k = 0; k < n; ++k) ranking.rank_of[ranking.order[k]] = k + 1;
  return ranking;
}

}  // namespace pcr99
