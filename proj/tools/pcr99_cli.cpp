// Command-line front end for the pcr99 shared library: single registrations,
// synthetic scene generation and Monte-Carlo benchmark sweeps.
//
// Exit codes: 0 success (register: converged), 2 register finished without
// convergence (best-effort result still written), 1 any error.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pcr99.h"

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

struct CorrDeleter {
  void operator()(pcr99_corr* p) const { pcr99_corr_free(p); }
};
struct ResultDeleter {
  void operator()(pcr99_result* p) const { pcr99_result_free(p); }
};
struct SceneDeleter {
  void operator()(pcr99_scene* p) const { pcr99_scene_free(p); }
};
struct TrialsDeleter {
  void operator()(pcr99_trials* p) const { pcr99_trials_free(p); }
};

int fail(pcr99_status status, const std::string& context) {
  std::cerr << "error: " << context << ": " << pcr99_status_name(status);
  const char* detail = pcr99_last_error();
  if (detail && *detail) std::cerr << " (" << detail << ")";
  std::cerr << "\n";
  return kExitError;
}

// Shared solver flags.
struct SolverFlags {
  double epsilon = 0.0;
  double inlier_threshold = 0.0;
  std::int64_t batch = 0;
  double time_budget = 0.0;
  std::string sampling = "ordered";
  std::uint64_t seed = 0;

  void attach(CLI::App* cmd) {
    pcr99_config defaults;
    pcr99_config_defaults(&defaults);
    epsilon = defaults.epsilon;
    inlier_threshold = defaults.inlier_threshold;
    batch = defaults.batch;
    cmd->add_option("--epsilon", epsilon, "Log-ratio consistency threshold")
        ->capture_default_str();
    cmd->add_option("--inlier-threshold", inlier_threshold, "Consensus residual bound")
        ->capture_default_str();
    cmd->add_option("--batch", batch, "Hypotheses between stopping checks")
        ->capture_default_str();
    cmd->add_option("--time-budget", time_budget, "Soft wall-clock cap in seconds (0 = none)");
    cmd->add_option("--sampling", sampling, "Sample order: ordered or random")
        ->check(CLI::IsMember({"ordered", "random"}))
        ->capture_default_str();
  }

  pcr99_config to_config() const {
    pcr99_config config;
    pcr99_config_defaults(&config);
    config.epsilon = epsilon;
    config.inlier_threshold = inlier_threshold;
    config.batch = batch;
    config.time_budget_s = time_budget;
    config.random_sampling = sampling == "random" ? 1 : 0;
    config.sampling_seed = seed;
    return config;
  }
};

ordered_json transform_json(double scale, const double rotation[9], const double translation[3]) {
  ordered_json j;
  j["scale"] = scale;
  j["rotation_row_major"] = std::vector<double>(rotation, rotation + 9);
  j["translation"] = std::vector<double>(translation, translation + 3);
  return j;
}

int cmd_register(const std::string& input, const std::string& output,
                 std::optional<double> scale, const SolverFlags& flags) {
  pcr99_corr* corr_raw = nullptr;
  if (const auto status = pcr99_corr_load(input.c_str(), &corr_raw); status != PCR99_OK)
    return fail(status, "loading " + input);
  std::unique_ptr<pcr99_corr, CorrDeleter> corr(corr_raw);

  const pcr99_config config = flags.to_config();
  pcr99_result* result_raw = nullptr;
  const auto status =
      scale ? pcr99_register_known_scale(corr.get(), *scale, &config, &result_raw)
            : pcr99_register_unknown_scale(corr.get(), &config, &result_raw);
  if (status != PCR99_OK) return fail(status, "registering " + input);
  std::unique_ptr<pcr99_result, ResultDeleter> result(result_raw);

  double rotation[9], translation[3];
  pcr99_result_rotation(result.get(), rotation);
  pcr99_result_translation(result.get(), translation);
  const bool converged = pcr99_result_converged(result.get()) != 0;
  const std::size_t inlier_count = pcr99_result_inlier_count(result.get());
  std::vector<std::size_t> inliers(inlier_count);
  pcr99_result_inliers(result.get(), inliers.data(), inliers.size());

  std::printf("%s (%zu correspondences)\n", input.c_str(), pcr99_corr_size(corr.get()));
  std::printf("  converged:  %s\n", converged ? "yes" : "no (best effort)");
  std::printf("  scale:      %.9g%s\n", pcr99_result_scale(result.get()),
              scale ? " (fixed)" : "");
  for (int r = 0; r < 3; ++r)
    std::printf("  rotation:   [% .9f % .9f % .9f]\n", rotation[3 * r], rotation[3 * r + 1],
                rotation[3 * r + 2]);
  std::printf("  translation:[% .9f % .9f % .9f]\n", translation[0], translation[1],
              translation[2]);
  std::printf("  inliers:    %zu\n", inlier_count);
  std::printf("  samples/prescreen-rejects/hypotheses: %" PRId64 "/%" PRId64 "/%" PRId64 "\n",
              pcr99_result_samples_drawn(result.get()),
              pcr99_result_prescreen_rejections(result.get()),
              pcr99_result_hypotheses_tested(result.get()));
  std::printf("  elapsed:    %.3fs\n", pcr99_result_elapsed_seconds(result.get()));

  if (!output.empty()) {
    ordered_json j = transform_json(pcr99_result_scale(result.get()), rotation, translation);
    j["converged"] = converged;
    j["inliers"] = inliers;
    j["samples_drawn"] = pcr99_result_samples_drawn(result.get());
    j["prescreen_rejections"] = pcr99_result_prescreen_rejections(result.get());
    j["hypotheses_tested"] = pcr99_result_hypotheses_tested(result.get());
    std::ofstream file(output, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot write " << output << "\n";
      return kExitError;
    }
    file << j.dump(2) << "\n";
  }
  return converged ? kExitOk : kExitNotConverged;
}

int cmd_generate(const pcr99_scene_spec& spec, const std::string& output,
                 const std::string& truth_path) {
  pcr99_scene* scene_raw = nullptr;
  if (const auto status = pcr99_scene_generate(&spec, &scene_raw); status != PCR99_OK)
    return fail(status, "generating scene");
  std::unique_ptr<pcr99_scene, SceneDeleter> scene(scene_raw);

  if (const auto status = pcr99_corr_save(pcr99_scene_corr(scene.get()), output.c_str());
      status != PCR99_OK)
    return fail(status, "writing " + output);

  double rotation[9], translation[3];
  pcr99_scene_rotation(scene.get(), rotation);
  pcr99_scene_translation(scene.get(), translation);
  std::vector<std::uint8_t> mask(spec.n);
  pcr99_scene_inlier_mask(scene.get(), mask.data(), mask.size());

  ordered_json j = transform_json(pcr99_scene_scale(scene.get()), rotation, translation);
  j["inlier_count"] = pcr99_scene_inlier_count(scene.get());
  j["inlier_mask"] = mask;
  std::ofstream file(truth_path, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot write " << truth_path << "\n";
    return kExitError;
  }
  file << j.dump(2) << "\n";

  std::printf("wrote %s (%" PRId64 " pairs, %zu inliers) and %s\n", output.c_str(), spec.n,
              pcr99_scene_inlier_count(scene.get()), truth_path.c_str());
  return kExitOk;
}

int cmd_benchmark(const pcr99_scene_spec& base, const pcr99_sweep& sweep,
                  const pcr99_config& config, const std::string& output) {
  pcr99_trials* trials_raw = nullptr;
  if (const auto status = pcr99_run_trials(&base, &sweep, &config, &trials_raw);
      status != PCR99_OK)
    return fail(status, "running trials");
  std::unique_ptr<pcr99_trials, TrialsDeleter> trials(trials_raw);

  if (!output.empty()) {
    if (const auto status = pcr99_trials_write_csv(trials.get(), output.c_str());
        status != PCR99_OK)
      return fail(status, "writing " + output);
  }

  const std::size_t row_count = pcr99_trials_summary(trials.get(), nullptr, 0);
  std::vector<pcr99_summary_row> rows(row_count);
  pcr99_trials_summary(trials.get(), rows.data(), rows.size());

  std::printf("%-8s %-7s %-10s %-9s %-10s %-12s %-10s %-10s\n", "ratio", "trials", "converged",
              "R>5deg", "R>10deg", "med_R_deg", "med_hyp", "med_s");
  for (const auto& row : rows) {
    std::printf("%-8g %-7" PRId64 " %-10" PRId64 " %-9" PRId64 " %-10" PRId64
                " %-12.4g %-10.0f %-10.3f\n",
                row.ratio, row.trials, row.converged, row.rot_err_over_5deg,
                row.rot_err_over_10deg, row.median_rot_err_deg, row.median_hypotheses,
                row.median_elapsed_s);
  }
  if (!output.empty()) std::printf("results: %s\n", output.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust correspondence-based point cloud registration"};
  app.require_subcommand(1);

  // register
  auto* reg = app.add_subcommand("register", "Align a correspondence file");
  std::string reg_input, reg_output;
  double reg_scale = 0.0;
  SolverFlags reg_flags;
  reg->add_option("--input", reg_input, "Correspondence file (ax,ay,az,bx,by,bz per line)")
      ->required();
  reg->add_option("--output", reg_output, "Result JSON path");
  auto* reg_scale_opt =
      reg->add_option("--scale", reg_scale, "Known relative scale (fixes the known-scale path)");
  reg_flags.attach(reg);
  reg->add_option("--seed", reg_flags.seed, "Seed for random sampling");

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic scene");
  pcr99_scene_spec gen_spec;
  pcr99_scene_spec_defaults(&gen_spec);
  std::string gen_output, gen_truth, gen_cloud;
  double gen_scale = 0.0;
  gen->add_option("--n", gen_spec.n, "Correspondence count")->capture_default_str();
  gen->add_option("--outlier-ratio", gen_spec.outlier_ratio, "Fraction of outliers [0, 0.99]")
      ->capture_default_str();
  gen->add_option("--sigma", gen_spec.noise_sigma, "Gaussian noise sigma")
      ->capture_default_str();
  gen->add_option("--seed", gen_spec.seed, "Scene seed")->capture_default_str();
  gen->add_option("--scale-min", gen_spec.scale_min, "Scale range lower bound")
      ->capture_default_str();
  gen->add_option("--scale-max", gen_spec.scale_max, "Scale range upper bound")
      ->capture_default_str();
  auto* gen_scale_opt = gen->add_option("--scale", gen_scale, "Fix the scale to this value");
  gen->add_option("--input", gen_cloud, "Source cloud point file (default: uniform cube)");
  gen->add_option("--output", gen_output, "Correspondence file to write")->required();
  gen->add_option("--ground-truth", gen_truth,
                  "Ground-truth JSON path (default: <output>.gt.json)");

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "Monte-Carlo sweep over outlier ratios");
  pcr99_scene_spec bench_spec;
  pcr99_scene_spec_defaults(&bench_spec);
  std::vector<double> bench_ratios{0.90, 0.95, 0.96, 0.97, 0.98, 0.99};
  std::int64_t bench_trials = 50;
  double bench_scale = 0.0;
  int bench_jobs = 1;
  bool bench_timing = false;
  std::string bench_output = "results.csv", bench_cloud;
  SolverFlags bench_flags;
  bench->add_option("--ratios", bench_ratios, "Outlier ratios to sweep")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--trials", bench_trials, "Trials per ratio")->capture_default_str();
  bench->add_option("--n", bench_spec.n, "Correspondence count per scene")
      ->capture_default_str();
  bench->add_option("--sigma", bench_spec.noise_sigma, "Gaussian noise sigma")
      ->capture_default_str();
  bench->add_option("--seed", bench_spec.seed, "Base seed")->capture_default_str();
  auto* bench_scale_opt = bench->add_option(
      "--scale", bench_scale, "Known-scale mode: fix the scale and tell the solver");
  bench->add_option("--scale-min", bench_spec.scale_min, "Scale range lower bound")
      ->capture_default_str();
  bench->add_option("--scale-max", bench_spec.scale_max, "Scale range upper bound")
      ->capture_default_str();
  bench->add_option("--jobs", bench_jobs, "Worker threads (records stay identical)")
      ->capture_default_str();
  bench->add_flag("--timing", bench_timing,
                  "Record wall-clock time per trial (CSV no longer rerun-stable)");
  bench->add_option("--input", bench_cloud, "Source cloud point file (default: uniform cube)");
  bench->add_option("--output", bench_output, "CSV path")->capture_default_str();
  bench_flags.attach(bench);

  CLI11_PARSE(app, argc, argv);

  try {
    if (reg->parsed()) {
      std::optional<double> scale;
      if (reg_scale_opt->count() > 0) {
        if (!(reg_scale > 0.0)) {
          std::cerr << "error: --scale must be positive\n";
          return kExitError;
        }
        scale = reg_scale;
      }
      return cmd_register(reg_input, reg_output, scale, reg_flags);
    }
    if (gen->parsed()) {
      if (gen_scale_opt->count() > 0) {
        gen_spec.scale_min = gen_scale;
        gen_spec.scale_max = gen_scale;
      }
      if (!gen_cloud.empty()) gen_spec.cloud_path = gen_cloud.c_str();
      if (gen_truth.empty()) gen_truth = gen_output + ".gt.json";
      return cmd_generate(gen_spec, gen_output, gen_truth);
    }
    // benchmark
    pcr99_sweep sweep{};
    sweep.ratios = bench_ratios.data();
    sweep.ratio_count = bench_ratios.size();
    sweep.trials_per_ratio = bench_trials;
    if (bench_scale_opt->count() > 0) {
      if (!(bench_scale > 0.0)) {
        std::cerr << "error: --scale must be positive\n";
        return kExitError;
      }
      sweep.known_scale = 1;
      sweep.known_scale_value = bench_scale;
    }
    sweep.jobs = bench_jobs;
    sweep.record_timing = bench_timing ? 1 : 0;
    if (!bench_cloud.empty()) bench_spec.cloud_path = bench_cloud.c_str();
    return cmd_benchmark(bench_spec, sweep, bench_flags.to_config(), bench_output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
