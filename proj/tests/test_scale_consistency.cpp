#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "pcr99/bench.hpp"
#include "pcr99/rng.hpp"
#include "pcr99/scale_consistency.hpp"

using namespace pcr99;

namespace {

// Direct evaluation of the truncated known-scale cost for one row; the
// production path uses a sorted/prefix-sum formulation, so this stays the
// independent reference.
double brute_force_cost(const LogRatioMatrix& log_ratio, int i, double g, double eps) {
  double cost = 0.0;
  for (int j = 0; j < log_ratio.size(); ++j) {
    if (j == i) continue;
    const double v = log_ratio(i, j);
    cost += std::isfinite(v) ? std::min(std::abs(v - g), eps) : eps;
  }
  return cost;
}

double brute_force_unknown_score(const LogRatioMatrix& log_ratio, int i, double eps) {
  const auto grid = candidate_grid(log_ratio, i);
  if (!grid) return -(log_ratio.size() - 1) * eps;
  double best = std::numeric_limits<double>::infinity();
  for (double g : grid->values) best = std::min(best, brute_force_cost(log_ratio, i, g, eps));
  return -best;
}

LogRatioMatrix matrix_with_row0(const std::vector<double>& row) {
  const int n = static_cast<int>(row.size()) + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j < n; ++j) {
    m(0, j) = row[j - 1];
    m(j, 0) = row[j - 1];
  }
  return LogRatioMatrix::from_entries(std::move(m));
}

CorrespondenceSet scaled_pair_cloud(double spacing_a, double spacing_b, int n) {
  std::vector<Point3> a, b;
  for (int i = 0; i < n; ++i) {
    a.push_back({spacing_a * i, 0, 0});
    b.push_back({spacing_b * i, 0, 0});
  }
  return {a, b};
}

}  // namespace

TEST_CASE("build_log_ratio: doubled spacing gives ln 2 everywhere") {
  const auto log_ratio = build_log_ratio(scaled_pair_cloud(1.0, 2.0, 3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(log_ratio(i, j) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(log_ratio.coincident_pairs == 0);
}

TEST_CASE("build_log_ratio: identical clouds give zero everywhere") {
  Rng rng(11);
  std::vector<Point3> cloud;
  for (int i = 0; i < 6; ++i) cloud.push_back(rng.uniform_in_unit_cube());
  const auto log_ratio = build_log_ratio({cloud, cloud});
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (i != j) CHECK(log_ratio(i, j) == 0.0);
}

TEST_CASE("build_log_ratio: uniform target scaling gives ln 3 on a random cloud") {
  Rng rng(12);
  std::vector<Point3> a, b;
  for (int i = 0; i < 4; ++i) {
    a.push_back(rng.uniform_in_unit_cube());
    b.push_back(3.0 * a.back());
  }
  const CorrespondenceSet corr{a, b};
  const auto log_ratio = build_log_ratio(corr);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      // Reference: evaluate the defining ratio for this pair directly.
      const double expected =
          std::log((b[i] - b[j]).norm() / (a[i] - a[j]).norm());
      CHECK(log_ratio(i, j) == expected);
      CHECK(std::abs(log_ratio(i, j) - std::log(3.0)) < 1e-12);
    }
  }
}

TEST_CASE("build_log_ratio: coincident points become sentinels, build continues") {
  std::vector<Point3> a{{0, 0, 0}, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  std::vector<Point3> b{{0, 0, 0}, {1, 1, 1}, {2, 0, 0}, {0, 2, 0}};
  const auto log_ratio = build_log_ratio({a, b});
  CHECK(log_ratio.coincident_pairs == 1);  // a0 == a1
  CHECK(!std::isfinite(log_ratio(0, 1)));
  CHECK(std::isfinite(log_ratio(2, 3)));
}

TEST_CASE("build_log_ratio: matrix equals its transpose bitwise") {
  Rng rng(13);
  std::vector<Point3> a, b;
  for (int i = 0; i < 20; ++i) {
    a.push_back(rng.uniform_in_unit_cube());
    b.push_back(rng.uniform_in_unit_cube());
  }
  const auto log_ratio = build_log_ratio({a, b});
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const double x = log_ratio(i, j), y = log_ratio(j, i);
      CHECK(std::memcmp(&x, &y, sizeof x) == 0);
    }
}

TEST_CASE("candidate_grid: spec rows") {
  SUBCASE("constant row collapses to one value") {
    const auto grid = candidate_grid(matrix_with_row0({0, 0, 0}), 0);
    REQUIRE(grid.has_value());
    CHECK(grid->values == std::vector<double>{0.0});
  }
  SUBCASE("span 0.4 over four steps of exactly 0.1") {
    const auto grid = candidate_grid(matrix_with_row0({-0.05, 0.02, 0.35}), 0);
    REQUIRE(grid.has_value());
    REQUIRE(grid->values.size() == 5);
    const std::vector<double> expected{-0.05, 0.05, 0.15, 0.25, 0.35};
    for (int k = 0; k < 5; ++k)
      CHECK(grid->values[k] == doctest::Approx(expected[k]).epsilon(1e-12));
    CHECK(grid->values.front() == -0.05);
    CHECK(grid->values.back() == doctest::Approx(0.35).epsilon(1e-12));
  }
  SUBCASE("short span still gets one step") {
    const auto grid = candidate_grid(matrix_with_row0({0, 0.04}), 0);
    REQUIRE(grid.has_value());
    REQUIRE(grid->values.size() == 2);
    CHECK(grid->values[0] == 0.0);
    CHECK(grid->values[1] == doctest::Approx(0.04).epsilon(1e-12));
  }
  SUBCASE("all-sentinel row reports empty") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    m(0, 1) = m(1, 0) = kLogRatioSentinel;
    m(0, 2) = m(2, 0) = kLogRatioSentinel;
    m(1, 2) = m(2, 1) = 0.5;
    const auto log_ratio = LogRatioMatrix::from_entries(std::move(m));
    CHECK_FALSE(candidate_grid(log_ratio, 0).has_value());
    CHECK(candidate_grid(log_ratio, 1).has_value());
  }
}

TEST_CASE("score_known_scale: exact cases") {
  SUBCASE("perfect consistency scores zero") {
    const auto log_ratio = build_log_ratio(scaled_pair_cloud(1.0, 2.0, 4));
    for (double s : score_known_scale(log_ratio, std::log(2.0), 0.1))
      CHECK(std::abs(s) < 1e-12);
  }
  SUBCASE("one close entry, one truncated") {
    const auto scores = score_known_scale(matrix_with_row0({0.0, 0.5}), 0.0, 0.1);
    CHECK(scores[0] == -0.1);
  }
  SUBCASE("everything beyond epsilon saturates at -(n-1)*eps") {
    const auto scores = score_known_scale(matrix_with_row0({1.0, 2.0, -3.0}), 0.0, 0.1);
    CHECK(scores[0] == doctest::Approx(-3 * 0.1).epsilon(1e-12));
  }
  SUBCASE("sentinels contribute exactly epsilon") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    m(0, 1) = m(1, 0) = kLogRatioSentinel;
    m(0, 2) = m(2, 0) = 0.0;
    m(1, 2) = m(2, 1) = 0.0;
    const auto scores =
        score_known_scale(LogRatioMatrix::from_entries(std::move(m)), 0.0, 0.1);
    CHECK(scores[0] == -0.1);
  }
}

TEST_CASE("score_unknown_scale: zero-noise consistency at any scale") {
  Rng rng(21);
  for (double scale : {1.3, 2.0, 4.9}) {
    std::vector<Point3> a, b;
    for (int i = 0; i < 8; ++i) {
      a.push_back(rng.uniform_in_unit_cube());
      b.push_back(scale * a.back());
    }
    const auto log_ratio = build_log_ratio({a, b});
    for (double s : score_unknown_scale(log_ratio, 0.1)) CHECK(std::abs(s) < 1e-12);
  }
}

TEST_CASE("score_unknown_scale: single row {0, 0.5} attains -0.1") {
  const auto scores = score_unknown_scale(matrix_with_row0({0.0, 0.5}), 0.1);
  // Exhaustive grid reference for the same row.
  CHECK(scores[0] ==
        doctest::Approx(brute_force_unknown_score(matrix_with_row0({0.0, 0.5}), 0, 0.1))
            .epsilon(1e-15));
  CHECK(scores[0] == doctest::Approx(-0.1).epsilon(1e-12));
}

TEST_CASE("score_unknown_scale: matches brute force on random matrices") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(derive_seed(31, seed, 0));
    const int n = 5 + static_cast<int>(rng.next_below(20));
    std::vector<Point3> a, b;
    for (int i = 0; i < n; ++i) {
      a.push_back(rng.uniform_in_unit_cube());
      b.push_back(rng.uniform_in_unit_cube());
    }
    const auto log_ratio = build_log_ratio({a, b});
    const auto scores = score_unknown_scale(log_ratio, 0.1);
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(scores[i] - brute_force_unknown_score(log_ratio, i, 0.1)) < 1e-12);
  }
}

TEST_CASE("score properties: dominance, range, scaling invariance") {
  Rng rng(37);
  const int n = 25;
  std::vector<Point3> a, b;
  for (int i = 0; i < n; ++i) {
    a.push_back(rng.uniform_in_unit_cube());
    b.push_back(rng.uniform_in_unit_cube());
  }
  const double eps = 0.1;
  const auto log_ratio = build_log_ratio({a, b});
  const auto unknown = score_unknown_scale(log_ratio, eps);

  SUBCASE("grid-max dominance over every known-scale evaluation") {
    for (int i = 0; i < n; ++i) {
      const auto grid = candidate_grid(log_ratio, i);
      REQUIRE(grid.has_value());
      for (double g : grid->values) {
        const auto known = score_known_scale(log_ratio, g, eps);
        CHECK(unknown[i] >= known[i]);
      }
    }
  }
  SUBCASE("scores live in [-(n-1)eps, 0]") {
    for (double s : unknown) {
      CHECK(s <= 0.0);
      CHECK(s >= -(n - 1) * eps);
    }
    for (double s : score_known_scale(log_ratio, 0.33, eps)) {
      CHECK(s <= 0.0);
      CHECK(s >= -(n - 1) * eps);
    }
  }
  SUBCASE("uniform target rescaling shifts entries but not the scores") {
    std::vector<Point3> b_scaled;
    for (const auto& p : b) b_scaled.push_back(2.5 * p);
    const auto shifted = build_log_ratio({a, b_scaled});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j)
          CHECK(shifted(i, j) ==
                doctest::Approx(log_ratio(i, j) + std::log(2.5)).epsilon(1e-9));
    const auto rescored = score_unknown_scale(shifted, eps);
    for (int i = 0; i < n; ++i) CHECK(rescored[i] == doctest::Approx(unknown[i]).epsilon(1e-9));
  }
}

TEST_CASE("score_unknown_scale: inliers outscore outliers on a 96%-outlier scene") {
  SceneSpec spec;
  spec.n = 1000;
  spec.outlier_ratio = 0.96;
  spec.noise_sigma = 0.01;
  spec.seed = 314159;
  const auto [corr, truth] = generate_scene(spec);
  const auto scores = score_unknown_scale(build_log_ratio(corr), 0.1);

  double inlier_sum = 0.0, outlier_sum = 0.0;
  int inliers = 0, outliers = 0;
  for (int i = 0; i < spec.n; ++i) {
    if (truth.inlier_mask[i]) {
      inlier_sum += scores[i];
      ++inliers;
    } else {
      outlier_sum += scores[i];
      ++outliers;
    }
  }
  CHECK(inliers == 40);
  CHECK(inlier_sum / inliers > outlier_sum / outliers);
}

TEST_CASE("rank_scores: order, ties, permutation consistency") {
  SUBCASE("spec example (-1, 0, -2)") {
    const auto ranking = rank_scores({-1.0, 0.0, -2.0});
    CHECK(ranking.order == std::vector<int>{1, 0, 2});
    CHECK(ranking.rank_of == std::vector<int>{2, 1, 3});
  }
  SUBCASE("all equal breaks ties by index") {
    const auto ranking = rank_scores({0.5, 0.5, 0.5, 0.5});
    CHECK(ranking.rank_of == std::vector<int>{1, 2, 3, 4});
  }
  SUBCASE("tie then lower") {
    const auto ranking = rank_scores({0.0, 0.0, -1.0});
    CHECK(ranking.rank_of == std::vector<int>{1, 2, 3});
  }
  SUBCASE("rank_of is a bijection and order is score-sorted") {
    Rng rng(55);
    std::vector<double> scores;
    for (int i = 0; i < 100; ++i) scores.push_back(-rng.uniform01());
    const auto ranking = rank_scores(scores);
    std::vector<bool> seen(100, false);
    for (int r : ranking.rank_of) {
      REQUIRE(r >= 1);
      REQUIRE(r <= 100);
      CHECK(!seen[r - 1]);
      seen[r - 1] = true;
    }
    for (int k = 1; k < 100; ++k)
      CHECK(ranking.scores[ranking.order[k - 1]] >= ranking.scores[ranking.order[k]]);
  }
}
