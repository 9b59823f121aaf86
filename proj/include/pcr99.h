/*
 * C API for the pcr99 registration library.
 *
 * Objects are opaque handles created and destroyed by the library; every
 * fallible call returns a pcr99_status, with a thread-local detail message
 * available from pcr99_last_error(). All getters on a valid handle are
 * infallible. Handles are not thread-safe individually, but distinct handles
 * may be used from distinct threads.
 */
#ifndef PCR99_H
#define PCR99_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PCR99_API __declspec(dllexport)
#else
#define PCR99_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pcr99_status {
  PCR99_OK = 0,
  PCR99_ERROR = 1,
  PCR99_NULL_ARGUMENT = 2,
  PCR99_INVALID_ARGUMENT = 3,
  PCR99_PARSE_ERROR = 4,
  PCR99_IO_ERROR = 5,
  PCR99_INSUFFICIENT_INLIERS = 6,
  PCR99_OUT_OF_MEMORY = 7
} pcr99_status;

PCR99_API const char* pcr99_status_name(pcr99_status status);

/* Detail message of the last failing call on this thread ("" if none). */
PCR99_API const char* pcr99_last_error(void);

/* ------------------------------------------------------------------ */
/* Correspondences                                                     */

typedef struct pcr99_corr pcr99_corr;

/* a_xyz/b_xyz are n consecutive xyz triples each. */
PCR99_API pcr99_status pcr99_corr_create(const double* a_xyz, const double* b_xyz, size_t n,
                                         pcr99_corr** out);
/* File format: ax,ay,az,bx,by,bz per line, '#' comments. */
PCR99_API pcr99_status pcr99_corr_load(const char* path, pcr99_corr** out);
PCR99_API pcr99_status pcr99_corr_save(const pcr99_corr* corr, const char* path);
PCR99_API size_t pcr99_corr_size(const pcr99_corr* corr);
PCR99_API pcr99_status pcr99_corr_get(const pcr99_corr* corr, size_t index, double a_xyz[3],
                                      double b_xyz[3]);
PCR99_API void pcr99_corr_free(pcr99_corr* corr);

/* ------------------------------------------------------------------ */
/* Registration                                                        */

typedef struct pcr99_config {
  double epsilon;             /* log-ratio consistency threshold */
  double inlier_threshold;    /* residual bound for consensus */
  int64_t batch;              /* hypotheses between stopping checks */
  int64_t min_inlier_floor;   /* stop when consensus >= max(floor, frac*n) */
  double min_inlier_fraction;
  int64_t max_hypotheses;     /* 0 = C(n,3) */
  double time_budget_s;       /* <= 0 = unlimited */
  int random_sampling;        /* 0 = ordered, 1 = uniform random */
  uint64_t sampling_seed;     /* used by random sampling only */
} pcr99_config;

PCR99_API void pcr99_config_defaults(pcr99_config* config);

typedef struct pcr99_result pcr99_result;

PCR99_API pcr99_status pcr99_register_unknown_scale(const pcr99_corr* corr,
                                                    const pcr99_config* config,
                                                    pcr99_result** out);
PCR99_API pcr99_status pcr99_register_known_scale(const pcr99_corr* corr, double scale,
                                                  const pcr99_config* config,
                                                  pcr99_result** out);

PCR99_API int pcr99_result_converged(const pcr99_result* result);
PCR99_API double pcr99_result_scale(const pcr99_result* result);
PCR99_API void pcr99_result_rotation(const pcr99_result* result, double row_major[9]);
PCR99_API void pcr99_result_translation(const pcr99_result* result, double xyz[3]);
PCR99_API size_t pcr99_result_inlier_count(const pcr99_result* result);
/* Copies up to capacity inlier indices (ascending); returns the total count. */
PCR99_API size_t pcr99_result_inliers(const pcr99_result* result, size_t* indices,
                                      size_t capacity);
PCR99_API int64_t pcr99_result_hypotheses_tested(const pcr99_result* result);
PCR99_API int64_t pcr99_result_prescreen_rejections(const pcr99_result* result);
PCR99_API int64_t pcr99_result_samples_drawn(const pcr99_result* result);
PCR99_API double pcr99_result_elapsed_seconds(const pcr99_result* result);
PCR99_API void pcr99_result_free(pcr99_result* result);

/* ------------------------------------------------------------------ */
/* Synthetic scenes                                                    */

typedef struct pcr99_scene_spec {
  int64_t n;
  double outlier_ratio;  /* in [0, 0.99] */
  double noise_sigma;
  double scale_min;      /* scale_min == scale_max fixes the scale */
  double scale_max;
  uint64_t seed;
  const char* cloud_path; /* NULL = uniform cube cloud */
} pcr99_scene_spec;

PCR99_API void pcr99_scene_spec_defaults(pcr99_scene_spec* spec);

typedef struct pcr99_scene pcr99_scene;

PCR99_API pcr99_status pcr99_scene_generate(const pcr99_scene_spec* spec, pcr99_scene** out);
/* Borrowed view; freed with the scene. */
PCR99_API const pcr99_corr* pcr99_scene_corr(const pcr99_scene* scene);
PCR99_API double pcr99_scene_scale(const pcr99_scene* scene);
PCR99_API void pcr99_scene_rotation(const pcr99_scene* scene, double row_major[9]);
PCR99_API void pcr99_scene_translation(const pcr99_scene* scene, double xyz[3]);
PCR99_API size_t pcr99_scene_inlier_count(const pcr99_scene* scene);
/* mask[i] = 1 for inliers; capacity must be >= n. */
PCR99_API pcr99_status pcr99_scene_inlier_mask(const pcr99_scene* scene, uint8_t* mask,
                                               size_t capacity);
PCR99_API void pcr99_scene_free(pcr99_scene* scene);

/* ------------------------------------------------------------------ */
/* Monte-Carlo sweeps                                                  */

typedef struct pcr99_sweep {
  const double* ratios;
  size_t ratio_count;
  int64_t trials_per_ratio;
  int known_scale;          /* nonzero: fix the scale and use the known-scale solver */
  double known_scale_value;
  int jobs;                 /* worker threads; records never depend on this */
  int record_timing;        /* nonzero: capture wall time (CSV then not rerun-stable) */
} pcr99_sweep;

typedef struct pcr99_trial_record {
  double ratio;
  uint64_t seed;
  double rot_err_deg;
  double trans_err;
  double scale_err_rel;
  double elapsed_s;
  int64_t hypotheses;
  int converged;
} pcr99_trial_record;

typedef struct pcr99_summary_row {
  double ratio;
  int64_t trials;
  int64_t converged;
  int64_t rot_err_over_5deg;
  int64_t rot_err_over_10deg;
  double median_rot_err_deg;
  double mean_rot_err_deg;
  double median_elapsed_s;
  double median_hypotheses;
} pcr99_summary_row;

typedef struct pcr99_trials pcr99_trials;

PCR99_API pcr99_status pcr99_run_trials(const pcr99_scene_spec* base, const pcr99_sweep* sweep,
                                        const pcr99_config* config, pcr99_trials** out);
PCR99_API size_t pcr99_trials_count(const pcr99_trials* trials);
PCR99_API pcr99_status pcr99_trials_get(const pcr99_trials* trials, size_t index,
                                        pcr99_trial_record* out);
PCR99_API pcr99_status pcr99_trials_write_csv(const pcr99_trials* trials, const char* path);
/* Copies up to capacity per-ratio summary rows; returns the total count. */
PCR99_API size_t pcr99_trials_summary(const pcr99_trials* trials, pcr99_summary_row* rows,
                                      size_t capacity);
PCR99_API void pcr99_trials_free(pcr99_trials* trials);

#ifdef __cplusplus
}
#endif

#endif /* PCR99_H */
