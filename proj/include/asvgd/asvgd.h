#ifndef ASVGD_ASVGD_H
#define ASVGD_ASVGD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ASVGD_BUILDING_LIBRARY)
#    define ASVGD_API __declspec(dllexport)
#  else
#    define ASVGD_API __declspec(dllimport)
#  endif
#else
#  define ASVGD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every function returning asvgd_status leaves a message for the calling
 * thread in asvgd_last_error() when it fails. */
typedef enum asvgd_status {
  ASVGD_OK = 0,
  ASVGD_ERR_VALIDATION = 1,
  ASVGD_ERR_NUMERICAL = 2,
  ASVGD_ERR_IO = 3,
  ASVGD_ERR_INTERNAL = 4
} asvgd_status;

typedef struct asvgd_mixture asvgd_mixture;
typedef struct asvgd_schedule asvgd_schedule;
typedef struct asvgd_sampler asvgd_sampler;
typedef struct asvgd_experiment asvgd_experiment;
typedef struct asvgd_result asvgd_result;

ASVGD_API const char* asvgd_version(void);
ASVGD_API const char* asvgd_last_error(void);
ASVGD_API const char* asvgd_status_name(asvgd_status status);

/* Strings returned through char** out-parameters are owned by the caller. */
ASVGD_API void asvgd_string_free(char* s);

/* ---- kernels ----------------------------------------------------------- */

/* exp(-|x - y|^2 / h) */
ASVGD_API asvgd_status asvgd_rbf_kernel(const double* x, const double* y, size_t dim, double h,
                                        double* out);
/* Gradient with respect to x, written to grad[dim]. */
ASVGD_API asvgd_status asvgd_rbf_kernel_grad(const double* x, const double* y, size_t dim,
                                             double h, double* grad);
/* med^2 / log n over pairwise distances of a row-major n x dim array. */
ASVGD_API asvgd_status asvgd_median_bandwidth(const double* particles, size_t n, size_t dim,
                                              double* h);

/* ---- schedules --------------------------------------------------------- */

/* family: none | constant | linear | hyperbolic | cyclical. p <= 0 selects the
 * family default; constant is only read by "constant". */
ASVGD_API asvgd_status asvgd_schedule_create(const char* family, size_t total_steps, double p,
                                             int cycles, double constant,
                                             double final_clamp_fraction, asvgd_schedule** out);
ASVGD_API void asvgd_schedule_destroy(asvgd_schedule* schedule);
ASVGD_API asvgd_status asvgd_schedule_gamma(const asvgd_schedule* schedule, size_t t,
                                            double* gamma);

/* ---- targets ----------------------------------------------------------- */

/* means: row-major count x dim. */
ASVGD_API asvgd_status asvgd_mixture_create(size_t count, size_t dim, const double* weights,
                                            const double* means, const double* sigmas,
                                            asvgd_mixture** out);
/* name: univariate5 | grid16 | irregular | highdim. dim and seed are read by
 * highdim, spacing by grid16. */
ASVGD_API asvgd_status asvgd_mixture_named(const char* name, size_t dim, uint64_t seed,
                                           double spacing, asvgd_mixture** out);
ASVGD_API void asvgd_mixture_destroy(asvgd_mixture* mixture);
ASVGD_API size_t asvgd_mixture_dimension(const asvgd_mixture* mixture);
ASVGD_API size_t asvgd_mixture_size(const asvgd_mixture* mixture);
/* Normalized weight, mean (dim values) and sigma of component k. */
ASVGD_API asvgd_status asvgd_mixture_component(const asvgd_mixture* mixture, size_t k,
                                               double* weight, double* mean, double* sigma);
ASVGD_API asvgd_status asvgd_mixture_log_density(const asvgd_mixture* mixture, const double* x,
                                                 double* out);
ASVGD_API asvgd_status asvgd_mixture_score(const asvgd_mixture* mixture, const double* x,
                                           double* out);
/* Writes count x dim samples, row-major. */
ASVGD_API asvgd_status asvgd_mixture_sample(const asvgd_mixture* mixture, size_t count,
                                            uint64_t seed, double* out);

/* ---- diagnostics ------------------------------------------------------- */

/* Unbiased MMD^2. bandwidth <= 0 uses the median heuristic on the pooled set. */
ASVGD_API asvgd_status asvgd_mmd2(const double* x, size_t nx, const double* y, size_t ny,
                                  size_t dim, double bandwidth, double* out);
/* fractions has asvgd_mixture_size() entries. */
ASVGD_API asvgd_status asvgd_coverage(const asvgd_mixture* mixture, const double* particles,
                                      size_t n, double radius, size_t* modes_covered,
                                      double* fractions);

/* ---- sampler ------------------------------------------------------------- */

/* Copies the target and the initial n x dim particles. */
ASVGD_API asvgd_status asvgd_sampler_create(const asvgd_mixture* target,
                                            const double* particles, size_t n,
                                            asvgd_sampler** out);
ASVGD_API void asvgd_sampler_destroy(asvgd_sampler* sampler);
/* One update x += step_size * phi. bandwidth <= 0 uses the median heuristic. */
ASVGD_API asvgd_status asvgd_sampler_step(asvgd_sampler* sampler, double step_size, double gamma,
                                          double bandwidth);
ASVGD_API size_t asvgd_sampler_count(const asvgd_sampler* sampler);
ASVGD_API size_t asvgd_sampler_iteration(const asvgd_sampler* sampler);
ASVGD_API asvgd_status asvgd_sampler_particles(const asvgd_sampler* sampler, double* out);

/* ---- experiments ------------------------------------------------------- */

ASVGD_API size_t asvgd_preset_count(void);
ASVGD_API const char* asvgd_preset_name(size_t index);

ASVGD_API asvgd_status asvgd_experiment_from_preset(const char* name, asvgd_experiment** out);
/* A config file that names a "preset" overrides that preset's fields. */
ASVGD_API asvgd_status asvgd_experiment_from_file(const char* path, asvgd_experiment** out);
ASVGD_API asvgd_status asvgd_experiment_from_json(const char* text, asvgd_experiment** out);
ASVGD_API void asvgd_experiment_destroy(asvgd_experiment* experiment);

/* key: seed | steps | particles | schedule | schedule-p | cycles | epsilon |
 * checkpoint-every | out | bandwidth. Call asvgd_experiment_validate after. */
ASVGD_API asvgd_status asvgd_experiment_set(asvgd_experiment* experiment, const char* key,
                                            const char* value);
ASVGD_API asvgd_status asvgd_experiment_validate(const asvgd_experiment* experiment);
ASVGD_API asvgd_status asvgd_experiment_to_json(const asvgd_experiment* experiment, char** out);
ASVGD_API asvgd_status asvgd_experiment_write_config(const asvgd_experiment* experiment,
                                                     const char* path);
/* Valid until the handle is modified or destroyed. */
ASVGD_API const char* asvgd_experiment_name(const asvgd_experiment* experiment);
ASVGD_API const char* asvgd_experiment_output_directory(const asvgd_experiment* experiment);

/* out_dir NULL keeps everything in memory. */
ASVGD_API asvgd_status asvgd_experiment_run(const asvgd_experiment* experiment,
                                            const char* out_dir, int overwrite,
                                            asvgd_result** out);
ASVGD_API asvgd_status asvgd_experiment_sweep(const asvgd_experiment* experiment,
                                              const char* out_dir, int overwrite, unsigned jobs,
                                              asvgd_result** out);
/* schedules NULL uses the config's compare list. The unannealed baseline is
 * always included. */
ASVGD_API asvgd_status asvgd_experiment_compare(const asvgd_experiment* experiment,
                                                const char* const* schedules, size_t count,
                                                const char* out_dir, int overwrite,
                                                unsigned jobs, asvgd_result** out);

typedef struct asvgd_final_stats {
  size_t iteration;
  double gamma;
  double mmd2;
  size_t modes_covered;
  size_t mode_count;
  double wall_seconds;
} asvgd_final_stats;

ASVGD_API void asvgd_result_destroy(asvgd_result* result);
ASVGD_API size_t asvgd_result_count(const asvgd_result* result);
ASVGD_API const char* asvgd_result_label(const asvgd_result* result, size_t index);
ASVGD_API asvgd_status asvgd_result_final(const asvgd_result* result, size_t index,
                                          asvgd_final_stats* stats);
/* fractions has mode_count entries. */
ASVGD_API asvgd_status asvgd_result_fractions(const asvgd_result* result, size_t index,
                                              double* fractions);

#ifdef __cplusplus
}
#endif

#endif
