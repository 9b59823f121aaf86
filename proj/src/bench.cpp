#include "pcr99/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <thread>

#include "pcr99/errors.hpp"
#include "pcr99/io.hpp"
#include "pcr99/rng.hpp"

namespace pcr99 {

int GroundTruth::inlier_count() const {
  return static_cast<int>(std::count(inlier_mask.begin(), inlier_mask.end(), std::uint8_t{1}));
}

std::pair<CorrespondenceSet, GroundTruth> generate_scene(const SceneSpec& spec) {
  if (spec.n < 3) throw BadSpecError("scene needs n >= 3");
  if (spec.outlier_ratio < 0.0 || spec.outlier_ratio > 0.99)
    throw BadSpecError("outlier_ratio must lie in [0, 0.99]");
  if (!(spec.scale_min > 0.0) || spec.scale_max < spec.scale_min)
    throw BadSpecError("invalid scale range");
  if (spec.noise_sigma < 0.0) throw BadSpecError("negative noise sigma");
  const int outliers = spec.outlier_count();
  if (spec.n - outliers < 3) throw BadSpecError("spec leaves fewer than 3 inliers");

  Rng rng(spec.seed);

  std::vector<Point3> source;
  if (spec.cloud_path) {
    source = fit_to_unit_cube(load_point_cloud(*spec.cloud_path));
    if (static_cast<int>(source.size()) != spec.n)
      throw BadSpecError("external cloud has " + std::to_string(source.size()) +
                         " points, spec.n is " + std::to_string(spec.n));
  } else {
    source.reserve(spec.n);
    for (int i = 0; i < spec.n; ++i) source.push_back(rng.uniform_in_unit_cube());
  }

  GroundTruth truth;
  truth.transform.scale = rng.uniform(spec.scale_min, spec.scale_max);
  truth.transform.rotation = rng.rotation().toRotationMatrix();
  truth.transform.translation = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                                 rng.uniform(-1.0, 1.0)};

  std::vector<Point3> target(spec.n);
  Eigen::Vector3d transformed_centroid = Eigen::Vector3d::Zero();
  for (int i = 0; i < spec.n; ++i) {
    const Point3 transformed = truth.transform.apply(source[i]);
    transformed_centroid += transformed;
    target[i] = transformed + rng.normal3(spec.noise_sigma);
  }
  transformed_centroid /= spec.n;

  // Outlier targets are re-drawn inside the sphere matching the transformed
  // cube's diagonal extent, so they overlap the genuine cloud.
  std::vector<int> order(spec.n);
  std::iota(order.begin(), order.end(), 0);
  for (int k = 0; k < outliers; ++k) {
    const int pick = k + static_cast<int>(rng.next_below(spec.n - k));
    std::swap(order[k], order[pick]);
  }
  truth.inlier_mask.assign(spec.n, 1);
  const double sphere_radius = std::sqrt(3.0) * truth.transform.scale / 2.0;
  for (int k = 0; k < outliers; ++k) {
    const int idx = order[k];
    truth.inlier_mask[idx] = 0;
    target[idx] = transformed_centroid + rng.uniform_in_ball(sphere_radius);
  }

  return {CorrespondenceSet(std::move(source), std::move(target)), std::move(truth)};
}

namespace {

TrialRecord run_one_trial(const SceneSpec& base, const SweepOptions& sweep,
                          const SolverConfig& config, double ratio, std::uint64_t ratio_index,
                          std::uint64_t trial_index) {
  SceneSpec spec = base;
  spec.outlier_ratio = ratio;
  spec.seed = derive_seed(base.seed, ratio_index, trial_index);
  if (sweep.known_scale) {
    spec.scale_min = *sweep.known_scale;
    spec.scale_max = *sweep.known_scale;
  }

  TrialRecord record;
  record.outlier_ratio = ratio;
  record.seed = spec.seed;

  const auto [corr, truth] = generate_scene(spec);

  SolverConfig trial_config = config;
  trial_config.sampling_seed = mix64(spec.seed ^ 0x5eedf00dULL);

  const auto start = std::chrono::steady_clock::now();
  try {
    const RegistrationResult result =
        sweep.known_scale ? register_known_scale(corr, *sweep.known_scale, trial_config)
                          : register_unknown_scale(corr, trial_config);
    record.converged = result.converged;
    record.hypotheses_tested = result.hypotheses_tested;
    record.rotation_error_deg =
        rotation_error_deg(result.transform.rotation, truth.transform.rotation);
    record.translation_error =
        (result.transform.translation - truth.transform.translation).norm();
    record.scale_error_relative =
        std::abs(result.transform.scale - truth.transform.scale) / truth.transform.scale;
  } catch (const InsufficientInliersError&) {
    record.converged = false;
    record.rotation_error_deg = kTrialRotationSentinelDeg;
    record.translation_error = kTrialErrorSentinel;
    record.scale_error_relative = kTrialErrorSentinel;
  }
  if (sweep.record_timing) {
    record.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return record;
}

double lower_median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const auto mid = values.begin() + (values.size() - 1) / 2;
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

void append_csv_row(std::string& out, const TrialRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%g,%llu,%.9g,%.9g,%.9g,%.6f,%lld,%d\n", r.outlier_ratio,
                static_cast<unsigned long long>(r.seed), r.rotation_error_deg,
                r.translation_error, r.scale_error_relative, r.elapsed_seconds,
                static_cast<long long>(r.hypotheses_tested), r.converged ? 1 : 0);
  out += buf;
}

}  // namespace

std::vector<TrialRecord> run_trials(const SceneSpec& base, const SweepOptions& sweep,
                                    const SolverConfig& config) {
  if (sweep.ratios.empty() || sweep.trials_per_ratio < 1)
    throw BadSpecError("sweep needs at least one ratio and one trial");

  const std::size_t total = sweep.ratios.size() * static_cast<std::size_t>(sweep.trials_per_ratio);
  std::vector<TrialRecord> records(total);

  const auto work = [&](std::size_t flat) {
    const std::size_t ratio_index = flat / sweep.trials_per_ratio;
    const std::size_t trial_index = flat % sweep.trials_per_ratio;
    records[flat] = run_one_trial(base, sweep, config, sweep.ratios[ratio_index], ratio_index,
                                  trial_index);
  };

  if (sweep.jobs <= 1) {
    for (std::size_t flat = 0; flat < total; ++flat) work(flat);
  } else {
    std::atomic<std::size_t> cursor{0};
    const int workers = std::min<int>(sweep.jobs, static_cast<int>(total));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t flat = cursor.fetch_add(1);
          if (flat >= total) return;
          work(flat);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  return records;
}

std::vector<SummaryRow> aggregate(const std::vector<TrialRecord>& records) {
  std::map<double, std::vector<const TrialRecord*>> groups;
  for (const auto& r : records) groups[r.outlier_ratio].push_back(&r);

  std::vector<SummaryRow> rows;
  rows.reserve(groups.size());
  for (const auto& [ratio, group] : groups) {
    SummaryRow row;
    row.outlier_ratio = ratio;
    row.trials = static_cast<int>(group.size());
    std::vector<double> rot, elapsed, hypotheses;
    double rot_sum = 0.0;
    for (const TrialRecord* r : group) {
      row.converged += r->converged ? 1 : 0;
      row.rot_err_over_5deg += r->rotation_error_deg > 5.0 ? 1 : 0;
      row.rot_err_over_10deg += r->rotation_error_deg > 10.0 ? 1 : 0;
      rot.push_back(r->rotation_error_deg);
      elapsed.push_back(r->elapsed_seconds);
      hypotheses.push_back(static_cast<double>(r->hypotheses_tested));
      rot_sum += r->rotation_error_deg;
    }
    row.median_rot_err_deg = lower_median(std::move(rot));
    row.mean_rot_err_deg = rot_sum / row.trials;
    row.median_elapsed_s = lower_median(std::move(elapsed));
    row.median_hypotheses = lower_median(std::move(hypotheses));
    rows.push_back(row);
  }
  return rows;
}

std::string to_csv(std::vector<TrialRecord> records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const TrialRecord& a, const TrialRecord& b) {
                     return a.outlier_ratio < b.outlier_ratio;
                   });
  std::string out = "ratio,seed,rot_err_deg,trans_err,scale_err_rel,elapsed_s,hypotheses,converged\n";
  for (const auto& r : records) append_csv_row(out, r);
  return out;
}

void write_csv(const std::vector<TrialRecord>& records, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path + " for writing");
  const std::string csv = to_csv(records);
  file.write(csv.data(), static_cast<std::streamsize>(csv.size()));
  if (!file) throw IoError("failed writing " + path);
}

}  // namespace pcr99
