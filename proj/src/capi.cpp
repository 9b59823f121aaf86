#include "pcr99.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "pcr99/bench.hpp"
#include "pcr99/errors.hpp"
#include "pcr99/geometry.hpp"
#include "pcr99/io.hpp"
#include "pcr99/solver.hpp"

struct pcr99_corr {
  pcr99::CorrespondenceSet set;
};

struct pcr99_result {
  pcr99::RegistrationResult result;
};

struct pcr99_scene {
  pcr99_corr corr;
  pcr99::GroundTruth truth;
};

struct pcr99_trials {
  std::vector<pcr99::TrialRecord> records;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what; }

// Maps the library's exception taxonomy onto status codes at the boundary.
template <typename Fn>
pcr99_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const pcr99::InsufficientInliersError& e) {
    set_error(e.what());
    return PCR99_INSUFFICIENT_INLIERS;
  } catch (const pcr99::ParseError& e) {
    set_error(e.what());
    return PCR99_PARSE_ERROR;
  } catch (const pcr99::IoError& e) {
    set_error(e.what());
    return PCR99_IO_ERROR;
  } catch (const pcr99::BadSpecError& e) {
    set_error(e.what());
    return PCR99_INVALID_ARGUMENT;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return PCR99_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return PCR99_OUT_OF_MEMORY;
  } catch (const std::exception& e) {
    set_error(e.what());
    return PCR99_ERROR;
  }
}

pcr99::SolverConfig to_solver_config(const pcr99_config& c) {
  pcr99::SolverConfig config;
  config.epsilon = c.epsilon;
  config.inlier_threshold = c.inlier_threshold;
  config.batch = c.batch;
  config.min_inlier_floor = c.min_inlier_floor;
  config.min_inlier_fraction = c.min_inlier_fraction;
  config.max_hypotheses = c.max_hypotheses;
  if (c.time_budget_s > 0.0) config.time_budget_s = c.time_budget_s;
  config.sampling =
      c.random_sampling ? pcr99::SamplingMode::kRandom : pcr99::SamplingMode::kOrdered;
  config.sampling_seed = c.sampling_seed;
  return config;
}

pcr99::SceneSpec to_scene_spec(const pcr99_scene_spec& s) {
  pcr99::SceneSpec spec;
  spec.n = static_cast<int>(s.n);
  spec.outlier_ratio = s.outlier_ratio;
  spec.noise_sigma = s.noise_sigma;
  spec.scale_min = s.scale_min;
  spec.scale_max = s.scale_max;
  spec.seed = s.seed;
  if (s.cloud_path) spec.cloud_path = s.cloud_path;
  return spec;
}

void copy_rotation(const Eigen::Matrix3d& rotation, double row_major[9]) {
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) row_major[3 * r + c] = rotation(r, c);
}

}  // namespace

extern "C" {

const char* pcr99_status_name(pcr99_status status) {
  switch (status) {
    case PCR99_OK: return "ok";
    case PCR99_ERROR: return "error";
    case PCR99_NULL_ARGUMENT: return "null argument";
    case PCR99_INVALID_ARGUMENT: return "invalid argument";
    case PCR99_PARSE_ERROR: return "parse error";
    case PCR99_IO_ERROR: return "io error";
    case PCR99_INSUFFICIENT_INLIERS: return "insufficient inliers";
    case PCR99_OUT_OF_MEMORY: return "out of memory";
  }
  return "unknown";
}

const char* pcr99_last_error(void) { return g_last_error.c_str(); }

pcr99_status pcr99_corr_create(const double* a_xyz, const double* b_xyz, size_t n,
                               pcr99_corr** out) {
  if (!a_xyz || !b_xyz || !out) return PCR99_NULL_ARGUMENT;
  *out = nullptr;
  return guarded([&] {
    std::vector<pcr99::Point3> source(n), target(n);
    for (size_t i = 0; i < n; ++i) {
      source[i] = {a_xyz[3 * i], a_xyz[3 * i + 1], a_xyz[3 * i + 2]};
      target[i] = {b_xyz[3 * i], b_xyz[3 * i + 1], b_xyz[3 * i + 2]};
    }
    *out = new pcr99_corr{pcr99::CorrespondenceSet(std::move(source), std::move(target))};
    return PCR99_OK;
  });
}

pcr99_status pcr99_corr_load(const char* path, pcr99_corr** out) {
  if (!path || !out) return PCR99_NULL_ARGUMENT;
  *out = nullptr;
  return guarded([&] {
    *out = new pcr99_corr{pcr99::load_correspondences(path)};
    return PCR99_OK;
  });
}

pcr99_status pcr99_corr_save(const pcr99_corr* corr, const char* path) {
  if (!corr || !path) return PCR99_NULL_ARGUMENT;
  return guarded([&] {
    pcr99::save_correspondences(corr->set, path);
    return PCR99_OK;
  });
}

size_t pcr99_corr_size(const pcr99_corr* corr) {
  return corr ? static_cast<size_t>(corr->set.size()) : 0;
}

pcr99_status pcr99_corr_get(const pcr99_corr* corr, size_t index, double a_xyz[3],
                            double b_xyz[3]) {
  if (!corr || !a_xyz || !b_xyz) return PCR99_NULL_ARGUMENT;
  if (index >= static_cast<size_t>(corr->set.size())) {
    set_error("index out of range");
    return PCR99_INVALID_ARGUMENT;
  }
  Eigen::Vector3d::Map(a_xyz) = corr->set.source[index];
  Eigen::Vector3d::Map(b_xyz) = corr->set.target[index];
  return PCR99_OK;
}

void pcr99_corr_free(pcr99_corr* corr) { delete corr; }

void pcr99_config_defaults(pcr99_config* config) {
  if (!config) return;
  const pcr99::SolverConfig defaults;
  config->epsilon = defaults.epsilon;
  config->inlier_threshold = defaults.inlier_threshold;
  config->batch = defaults.batch;
  config->min_inlier_floor = defaults.min_inlier_floor;
  config->min_inlier_fraction = defaults.min_inlier_fraction;
  config->max_hypotheses = 0;
  config->time_budget_s = 0.0;
  config->random_sampling = 0;
  config->sampling_seed = 0;
}

pcr99_status pcr99_register_unknown_scale(const pcr99_corr* corr, const pcr99_config* config,
                                          pcr99_result** out) {
  if (!corr || !config || !out) return PCR99_NULL_ARGUMENT;
  *out = nullptr;
  return guarded([&] {
    *out = new pcr99_result{pcr99::register_unknown_scale(corr->set, to_solver_config(*config))};
    return PCR99_OK;
  });
}

pcr99_status pcr99_register_known_scale(const pcr99_corr* corr, double scale,
                                        const pcr99_config* config, pcr99_result** out) {
  if (!corr || !config || !out) return PCR99_NULL_ARGUMENT;
  *out = nullptr;
  return guarded([&] {
    *out = new pcr99_result{
        pcr99::register_known_scale(corr->set, scale, to_solver_config(*config))};
    return PCR99_OK;
  });
}

int pcr99_result_converged(const pcr99_result* result) {
  return result->result.converged ? 1 : 0;
}

double pcr99_result_scale(const pcr99_result* result) { return result->result.transform.scale; }

void pcr99_result_rotation(const pcr99_result* result, double row_major[9]) {
  copy_rotation(result->result.transform.rotation, row_major);
}

void pcr99_result_translation(const pcr99_result* result, double xyz[3]) {
  Eigen::Vector3d::Map(xyz) = result->result.transform.translation;
}

size_t pcr99_result_inlier_count(const pcr99_result* result) {
  return result->result.inliers.size();
}

size_t pcr99_result_inliers(const pcr99_result* result, size_t* indices, size_t capacity) {
  const auto& inliers = result->result.inliers;
  if (indices) {
    const size_t count = std::min(capacity, inliers.size());
    for (size_t i = 0; i < count; ++i) indices[i] = static_cast<size_t>(inliers[i]);
  }
  return inliers.size();
}

int64_t pcr99_result_hypotheses_tested(const pcr99_result* result) {
  return result->result.hypotheses_tested;
}

int64_t pcr99_result_prescreen_rejections(const pcr99_result* result) {
  return result->result.prescreen_rejections;
}

int64_t pcr99_result_samples_drawn(const pcr99_result* result) {
  return result->result.samples_drawn;
}

double pcr99_result_elapsed_seconds(const pcr99_result* result) {
  return result->result.elapsed_seconds;
}

void pcr99_result_free(pcr99_result* result) { delete result; }

void pcr99_scene_spec_defaults(pcr99_scene_spec* spec) {
  if (!spec) return;
  const pcr99::SceneSpec defaults;
  spec->n = defaults.n;
  spec->outlier_ratio = defaults.outlier_ratio;
  spec->noise_sigma = defaults.noise_sigma;
  spec->scale_min = defaults.scale_min;
  spec->scale_max = defaults.scale_max;
  spec->seed = defaults.seed;
  spec->cloud_path = nullptr;
}

pcr99_status pcr99_scene_generate(const pcr99_scene_spec* spec, pcr99_scene** out) {
  if (!spec || !out) return PCR99_NULL_ARGUMENT;
  *out = nullptr;
  return guarded([&] {
    auto [corr, truth] = pcr99::generate_scene(to_scene_spec(*spec));
    *out = new pcr99_scene{pcr99_corr{std::move(corr)}, std::move(truth)};
    return PCR99_OK;
  });
}

const pcr99_corr* pcr99_scene_corr(const pcr99_scene* scene) { return &scene->corr; }

double pcr99_scene_scale(const pcr99_scene* scene) { return scene->truth.transform.scale; }

void pcr99_scene_rotation(const pcr99_scene* scene, double row_major[9]) {
  copy_rotation(scene->truth.transform.rotation, row_major);
}

void pcr99_scene_translation(const pcr99_scene* scene, double xyz[3]) {
  Eigen::Vector3d::Map(xyz) = scene->truth.transform.translation;
}

size_t pcr99_scene_inlier_count(const pcr99_scene* scene) {
  return static_cast<size_t>(scene->truth.inlier_count());
}

pcr99_status pcr99_scene_inlier_mask(const pcr99_scene* scene, uint8_t* mask, size_t capacity) {
  if (!scene || !mask) return PCR99_NULL_ARGUMENT;
  const auto& source = scene->truth.inlier_mask;
  if (capacity < source.size()) {
    set_error("mask buffer too small");
    return PCR99_INVALID_ARGUMENT;
  }
  std::memcpy(mask, source.data(), source.size());
  return PCR99_OK;
}

void pcr99_scene_free(pcr99_scene* scene) { delete scene; }

pcr99_status pcr99_run_trials(const pcr99_scene_spec* base, const pcr99_sweep* sweep,
                              const pcr99_config* config, pcr99_trials** out) {
  if (!base || !sweep || !config || !out || !sweep->ratios) return PCR99_NULL_ARGUMENT;
  *out = nullptr;
  return guarded([&] {
    pcr99::SweepOptions options;
    options.ratios.assign(sweep->ratios, sweep->ratios + sweep->ratio_count);
    options.trials_per_ratio = static_cast<int>(sweep->trials_per_ratio);
    if (sweep->known_scale) options.known_scale = sweep->known_scale_value;
    options.jobs = sweep->jobs;
    options.record_timing = sweep->record_timing != 0;
    *out = new pcr99_trials{
        pcr99::run_trials(to_scene_spec(*base), options, to_solver_config(*config))};
    return PCR99_OK;
  });
}

size_t pcr99_trials_count(const pcr99_trials* trials) { return trials->records.size(); }

pcr99_status pcr99_trials_get(const pcr99_trials* trials, size_t index,
                              pcr99_trial_record* out) {
  if (!trials || !out) return PCR99_NULL_ARGUMENT;
  if (index >= trials->records.size()) {
    set_error("index out of range");
    return PCR99_INVALID_ARGUMENT;
  }
  const pcr99::TrialRecord& r = trials->records[index];
  out->ratio = r.outlier_ratio;
  out->seed = r.seed;
  out->rot_err_deg = r.rotation_error_deg;
  out->trans_err = r.translation_error;
  out->scale_err_rel = r.scale_error_relative;
  out->elapsed_s = r.elapsed_seconds;
  out->hypotheses = r.hypotheses_tested;
  out->converged = r.converged ? 1 : 0;
  return PCR99_OK;
}

pcr99_status pcr99_trials_write_csv(const pcr99_trials* trials, const char* path) {
  if (!trials || !path) return PCR99_NULL_ARGUMENT;
  return guarded([&] {
    pcr99::write_csv(trials->records, path);
    return PCR99_OK;
  });
}

size_t pcr99_trials_summary(const pcr99_trials* trials, pcr99_summary_row* rows,
                            size_t capacity) {
  const auto summary = pcr99::aggregate(trials->records);
  if (rows) {
    const size_t count = std::min(capacity, summary.size());
    for (size_t i = 0; i < count; ++i) {
      const pcr99::SummaryRow& s = summary[i];
      rows[i].ratio = s.outlier_ratio;
      rows[i].trials = s.trials;
      rows[i].converged = s.converged;
      rows[i].rot_err_over_5deg = s.rot_err_over_5deg;
      rows[i].rot_err_over_10deg = s.rot_err_over_10deg;
      rows[i].median_rot_err_deg = s.median_rot_err_deg;
      rows[i].mean_rot_err_deg = s.mean_rot_err_deg;
      rows[i].median_elapsed_s = s.median_elapsed_s;
      rows[i].median_hypotheses = s.median_hypotheses;
    }
  }
  return summary.size();
}

void pcr99_trials_free(pcr99_trials* trials) { delete trials; }

}  // extern "C"
