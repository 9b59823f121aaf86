#include "pcr99/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "pcr99/errors.hpp"
#include "pcr99/rng.hpp"
#include "pcr99/sampler.hpp"
#include "pcr99/scale_consistency.hpp"

namespace pcr99 {

std::vector<int> consensus(const SimilarityTransform& transform, const CorrespondenceSet& corr,
                           double inlier_threshold) {
  std::vector<int> inliers;
  const int n = corr.size();
  for (int i = 0; i < n; ++i) {
    if (residual(transform, corr, i) <= inlier_threshold) inliers.push_back(i);
  }
  return inliers;
}

namespace {

std::int64_t triplet_count(std::int64_t n) { return n * (n - 1) * (n - 2) / 6; }

// Uniform random 3-subset; member order is irrelevant downstream.
void draw_random_triplet(Rng& rng, int n, int& i, int& j, int& k) {
  i = static_cast<int>(rng.next_below(n));
  do {
    j = static_cast<int>(rng.next_below(n));
  } while (j == i);
  do {
    k = static_cast<int>(rng.next_below(n));
  } while (k == i || k == j);
}

RegistrationResult run_pipeline(const CorrespondenceSet& corr, const SolverConfig& config,
                                std::optional<double> fixed_scale) {
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed_s = [&start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const int n = corr.size();
  const std::int64_t max_hypotheses =
      config.max_hypotheses > 0 ? config.max_hypotheses : triplet_count(n);
  const double stop_threshold =
      std::max(static_cast<double>(config.min_inlier_floor), config.min_inlier_fraction * n);
  const std::optional<double> log_scale =
      fixed_scale ? std::optional<double>(std::log(*fixed_scale)) : std::nullopt;

  const LogRatioMatrix log_ratio = build_log_ratio(corr);

  // Random sampling skips scoring entirely: the ranking would influence
  // nothing downstream of the sample order.
  const bool ordered = config.sampling == SamplingMode::kOrdered;
  Ranking ranking;
  if (ordered) {
    ranking = rank_scores(log_scale
                              ? score_known_scale(log_ratio, *log_scale, config.epsilon)
                              : score_unknown_scale(log_ratio, config.epsilon));
  }
  TripletEnumerator enumerator(ranking);
  Rng rng(config.sampling_seed);
  const std::int64_t random_sample_cap = 100 * triplet_count(n);

  RegistrationResult result;
  std::vector<int> largest;
  bool converged = false;
  bool budget_exhausted = false;
  int sample[3];

  while (!converged && !budget_exhausted) {
    if (ordered) {
      const auto triplet = enumerator.next();
      if (!triplet) break;
      sample[0] = triplet->i;
      sample[1] = triplet->j;
      sample[2] = triplet->k;
    } else {
      if (result.samples_drawn >= random_sample_cap) break;
      draw_random_triplet(rng, n, sample[0], sample[1], sample[2]);
    }
    ++result.samples_drawn;

    const bool pass =
        log_scale ? prescreen_known_scale(log_ratio, sample[0], sample[1], sample[2],
                                          *log_scale, config.epsilon)
                  : prescreen_unknown_scale(log_ratio, sample[0], sample[1], sample[2],
                                            config.epsilon);
    if (!pass) {
      ++result.prescreen_rejections;
      continue;
    }

    // Degenerate samples still count as tested hypotheses (with an empty
    // consensus) so the counters stay consistent.
    ++result.hypotheses_tested;
    if (const auto hypothesis = fit_similarity(corr, sample, fixed_scale)) {
      auto inliers = consensus(*hypothesis, corr, config.inlier_threshold);
      if (inliers.size() > largest.size()) largest = std::move(inliers);
    }

    if (result.hypotheses_tested % config.batch == 0) {
      if (static_cast<double>(largest.size()) >= stop_threshold) {
        converged = true;
      } else if (config.time_budget_s && elapsed_s() > *config.time_budget_s) {
        budget_exhausted = true;
      }
    }
    if (result.hypotheses_tested >= max_hypotheses) budget_exhausted = true;
  }

  if (largest.size() < 3)
    throw InsufficientInliersError("no 3-point consensus found (" +
                                   std::to_string(largest.size()) + " inliers)");

  // Final refit on the full consensus, then report that transform's own
  // consensus so every reported inlier satisfies the residual bound.
  const auto refit = fit_similarity(corr, largest, fixed_scale);
  if (refit) {
    result.transform = *refit;
    result.inliers = consensus(*refit, corr, config.inlier_threshold);
  }
  if (!refit || result.inliers.size() < 3) {
    // Refit degeneracy is not observed in practice; degrade to best-effort.
    converged = false;
    if (!refit) throw InsufficientInliersError("consensus refit degenerate");
  }
  result.converged = converged;
  result.elapsed_seconds = elapsed_s();
  return result;
}

}  // namespace

RegistrationResult register_unknown_scale(const CorrespondenceSet& corr,
                                          const SolverConfig& config) {
  return run_pipeline(corr, config, std::nullopt);
}

RegistrationResult register_known_scale(const CorrespondenceSet& corr, double scale,
                                        const SolverConfig& config) {
  if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
  return run_pipeline(corr, config, scale);
}

RegistrationResult register_random_baseline(const CorrespondenceSet& corr,
                                            const SolverConfig& config,
                                            std::optional<double> scale) {
  SolverConfig random_config = config;
  random_config.sampling = SamplingMode::kRandom;
  return scale ? register_known_scale(corr, *scale, random_config)
               : register_unknown_scale(corr, random_config);
}

}  // namespace pcr99
