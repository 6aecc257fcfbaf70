#include "asvgd/asvgd.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "diagnostics.hpp"
#include "engine.hpp"
#include "experiment.hpp"

using namespace asvgd;

struct asvgd_mixture {
  GaussianMixture mixture;
};

struct asvgd_schedule {
  AnnealingSchedule schedule;
};

struct asvgd_sampler {
  GaussianMixture target;
  ParticleSet state;
};

struct asvgd_experiment {
  ExperimentConfig config;
};

struct asvgd_result {
  std::vector<LabeledResult> entries;
};

namespace {

thread_local std::string last_error;

asvgd_status fail(asvgd_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <class F>
asvgd_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return ASVGD_OK;
  } catch (const Error& e) {
    return fail(static_cast<asvgd_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ASVGD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ASVGD_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ASVGD_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* what) {
  if (!p) throw ValidationError(std::string(what) + " must not be NULL");
}

Matrix to_matrix(const double* data, std::size_t rows, std::size_t cols) {
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  if (rows * cols > 0) std::memcpy(m.data(), data, rows * cols * sizeof(double));
  return m;
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::optional<OutputOptions> output_options(const char* dir, int overwrite) {
  if (!dir) return std::nullopt;
  return OutputOptions{dir, overwrite != 0};
}

const LabeledResult& entry(const asvgd_result* r, std::size_t index) {
  require(r, "result");
  if (index >= r->entries.size()) throw ValidationError("result index out of range");
  return r->entries[index];
}

}  // namespace

extern "C" {

const char* asvgd_version(void) { return ASVGD_VERSION; }

const char* asvgd_last_error(void) { return last_error.c_str(); }

const char* asvgd_status_name(asvgd_status status) {
  switch (status) {
    case ASVGD_OK: return "ok";
    case ASVGD_ERR_VALIDATION: return "validation error";
    case ASVGD_ERR_NUMERICAL: return "numerical failure";
    case ASVGD_ERR_IO: return "I/O error";
    case ASVGD_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void asvgd_string_free(char* s) { std::free(s); }

asvgd_status asvgd_rbf_kernel(const double* x, const double* y, size_t dim, double h,
                              double* out) {
  return guarded([&] {
    require(x, "x");
    require(y, "y");
    require(out, "out");
    *out = RbfKernel(h)({x, dim}, {y, dim});
  });
}

asvgd_status asvgd_rbf_kernel_grad(const double* x, const double* y, size_t dim, double h,
                                   double* grad) {
  return guarded([&] {
    require(x, "x");
    require(y, "y");
    require(grad, "grad");
    RbfKernel(h).grad_first({x, dim}, {y, dim}, {grad, dim});
  });
}

asvgd_status asvgd_median_bandwidth(const double* particles, size_t n, size_t dim, double* h) {
  return guarded([&] {
    require(particles, "particles");
    require(h, "h");
    *h = median_heuristic(to_matrix(particles, n, dim));
  });
}

asvgd_status asvgd_schedule_create(const char* family, size_t total_steps, double p, int cycles,
                                   double constant, double final_clamp_fraction,
                                   asvgd_schedule** out) {
  return guarded([&] {
    require(family, "family");
    require(out, "out");
    ScheduleSpec spec;
    spec.family = family;
    if (p > 0.0) spec.p = p;
    spec.cycles = cycles;
    spec.constant = constant;
    spec.final_clamp_fraction = final_clamp_fraction;
    *out = new asvgd_schedule{spec.build(total_steps)};
  });
}

void asvgd_schedule_destroy(asvgd_schedule* schedule) { delete schedule; }

asvgd_status asvgd_schedule_gamma(const asvgd_schedule* schedule, size_t t, double* gamma) {
  return guarded([&] {
    require(schedule, "schedule");
    require(gamma, "gamma");
    *gamma = schedule->schedule.gamma(t);
  });
}

asvgd_status asvgd_mixture_create(size_t count, size_t dim, const double* weights,
                                  const double* means, const double* sigmas,
                                  asvgd_mixture** out) {
  return guarded([&] {
    require(weights, "weights");
    require(means, "means");
    require(sigmas, "sigmas");
    require(out, "out");
    std::vector<MixtureComponent> comps;
    for (std::size_t k = 0; k < count; ++k) {
      comps.push_back({weights[k], Point(means + k * dim, means + (k + 1) * dim), sigmas[k]});
    }
    *out = new asvgd_mixture{GaussianMixture(std::move(comps))};
  });
}

asvgd_status asvgd_mixture_named(const char* name, size_t dim, uint64_t seed, double spacing,
                                 asvgd_mixture** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = new asvgd_mixture{named_target(name, {dim, seed, spacing})};
  });
}

void asvgd_mixture_destroy(asvgd_mixture* mixture) { delete mixture; }

size_t asvgd_mixture_dimension(const asvgd_mixture* mixture) {
  return mixture ? mixture->mixture.dimension() : 0;
}

size_t asvgd_mixture_size(const asvgd_mixture* mixture) {
  return mixture ? mixture->mixture.size() : 0;
}

asvgd_status asvgd_mixture_component(const asvgd_mixture* mixture, size_t k, double* weight,
                                     double* mean, double* sigma) {
  return guarded([&] {
    require(mixture, "mixture");
    if (k >= mixture->mixture.size()) throw ValidationError("component index out of range");
    const MixtureComponent& c = mixture->mixture.component(k);
    if (weight) *weight = c.weight;
    if (mean) std::copy(c.mean.begin(), c.mean.end(), mean);
    if (sigma) *sigma = c.sigma;
  });
}

asvgd_status asvgd_mixture_log_density(const asvgd_mixture* mixture, const double* x,
                                       double* out) {
  return guarded([&] {
    require(mixture, "mixture");
    require(x, "x");
    require(out, "out");
    *out = mixture->mixture.log_density({x, mixture->mixture.dimension()});
  });
}

asvgd_status asvgd_mixture_score(const asvgd_mixture* mixture, const double* x, double* out) {
  return guarded([&] {
    require(mixture, "mixture");
    require(x, "x");
    require(out, "out");
    const std::size_t d = mixture->mixture.dimension();
    mixture->mixture.score_into({x, d}, {out, d});
  });
}

asvgd_status asvgd_mixture_sample(const asvgd_mixture* mixture, size_t count, uint64_t seed,
                                  double* out) {
  return guarded([&] {
    require(mixture, "mixture");
    require(out, "out");
    const Matrix s = mixture->mixture.sample(count, seed);
    std::copy(s.data(), s.data() + s.size(), out);
  });
}

asvgd_status asvgd_mmd2(const double* x, size_t nx, const double* y, size_t ny, size_t dim,
                        double bandwidth, double* out) {
  return guarded([&] {
    require(x, "x");
    require(y, "y");
    require(out, "out");
    const Matrix a = to_matrix(x, nx, dim);
    const Matrix b = to_matrix(y, ny, dim);
    *out = bandwidth > 0.0 ? mmd2_unbiased(a, b, RbfKernel(bandwidth)) : mmd2_unbiased(a, b);
  });
}

asvgd_status asvgd_coverage(const asvgd_mixture* mixture, const double* particles, size_t n,
                            double radius, size_t* modes_covered, double* fractions) {
  return guarded([&] {
    require(mixture, "mixture");
    require(particles, "particles");
    const CoverageStats stats =
        coverage_stats(to_matrix(particles, n, mixture->mixture.dimension()), mixture->mixture,
                       radius);
    if (modes_covered) *modes_covered = stats.modes_covered;
    if (fractions) std::copy(stats.mode_fractions.begin(), stats.mode_fractions.end(), fractions);
  });
}

asvgd_status asvgd_sampler_create(const asvgd_mixture* target, const double* particles, size_t n,
                                  asvgd_sampler** out) {
  return guarded([&] {
    require(target, "target");
    require(particles, "particles");
    require(out, "out");
    if (n == 0) throw ValidationError("sampler needs at least one particle");
    Matrix x = to_matrix(particles, n, target->mixture.dimension());
    if (!all_finite(x)) throw ValidationError("initial particles must be finite");
    *out = new asvgd_sampler{target->mixture, {std::move(x), 0}};
  });
}

void asvgd_sampler_destroy(asvgd_sampler* sampler) { delete sampler; }

asvgd_status asvgd_sampler_step(asvgd_sampler* sampler, double step_size, double gamma,
                                double bandwidth) {
  return guarded([&] {
    require(sampler, "sampler");
    if (!(step_size > 0.0) || !std::isfinite(step_size)) {
      throw ValidationError("step_size must be positive");
    }
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ValidationError("gamma must lie in [0, 1]");
    KernelSpec spec;
    if (bandwidth > 0.0) spec.policy = FixedBandwidth{bandwidth};
    const Matrix& x = sampler->state.positions;
    const Matrix d2 = pairwise_squared_distances(x);
    if (!d2.allFinite()) throw NumericalError("pairwise distances overflowed");
    const RbfKernel kernel = resolve_kernel_from_distances(spec, d2);
    Matrix next = x + step_size * direction_terms(x, d2, sampler->target, kernel, gamma).total();
    if (!all_finite(next)) {
      throw NumericalError("non-finite particle state after step " +
                           std::to_string(sampler->state.iteration));
    }
    sampler->state.positions = std::move(next);
    ++sampler->state.iteration;
  });
}

size_t asvgd_sampler_count(const asvgd_sampler* sampler) {
  return sampler ? sampler->state.count() : 0;
}

size_t asvgd_sampler_iteration(const asvgd_sampler* sampler) {
  return sampler ? sampler->state.iteration : 0;
}

asvgd_status asvgd_sampler_particles(const asvgd_sampler* sampler, double* out) {
  return guarded([&] {
    require(sampler, "sampler");
    require(out, "out");
    const Matrix& x = sampler->state.positions;
    std::copy(x.data(), x.data() + x.size(), out);
  });
}

size_t asvgd_preset_count(void) { return preset_names().size(); }

const char* asvgd_preset_name(size_t index) {
  static const std::vector<std::string> names = preset_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

asvgd_status asvgd_experiment_from_preset(const char* name, asvgd_experiment** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = new asvgd_experiment{load_config({}, name)};
  });
}

asvgd_status asvgd_experiment_from_file(const char* path, asvgd_experiment** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new asvgd_experiment{load_config(path)};
  });
}

asvgd_status asvgd_experiment_from_json(const char* text, asvgd_experiment** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new asvgd_experiment{parse_config(text)};
  });
}

void asvgd_experiment_destroy(asvgd_experiment* experiment) { delete experiment; }

asvgd_status asvgd_experiment_set(asvgd_experiment* experiment, const char* key,
                                  const char* value) {
  return guarded([&] {
    require(experiment, "experiment");
    require(key, "key");
    require(value, "value");
    apply_override(experiment->config, key, value);
  });
}

asvgd_status asvgd_experiment_validate(const asvgd_experiment* experiment) {
  return guarded([&] {
    require(experiment, "experiment");
    validate(experiment->config);
  });
}

asvgd_status asvgd_experiment_to_json(const asvgd_experiment* experiment, char** out) {
  return guarded([&] {
    require(experiment, "experiment");
    require(out, "out");
    *out = duplicate(to_json(experiment->config).dump(2));
  });
}

asvgd_status asvgd_experiment_write_config(const asvgd_experiment* experiment, const char* path) {
  return guarded([&] {
    require(experiment, "experiment");
    require(path, "path");
    write_config(experiment->config, path);
  });
}

const char* asvgd_experiment_name(const asvgd_experiment* experiment) {
  return experiment ? experiment->config.experiment_name.c_str() : "";
}

const char* asvgd_experiment_output_directory(const asvgd_experiment* experiment) {
  return experiment ? experiment->config.output_directory.c_str() : "";
}

asvgd_status asvgd_experiment_run(const asvgd_experiment* experiment, const char* out_dir,
                                  int overwrite, asvgd_result** out) {
  return guarded([&] {
    require(experiment, "experiment");
    auto result = std::make_unique<asvgd_result>();
    const ExperimentConfig& c = experiment->config;
    ExperimentResult r = out_dir ? run_experiment(c, {out_dir, overwrite != 0}) : execute(c);
    result->entries.push_back({c.schedule.family, c, std::move(r)});
    if (out) *out = result.release();
  });
}

asvgd_status asvgd_experiment_sweep(const asvgd_experiment* experiment, const char* out_dir,
                                    int overwrite, unsigned jobs, asvgd_result** out) {
  return guarded([&] {
    require(experiment, "experiment");
    auto result = std::make_unique<asvgd_result>();
    result->entries = run_sweep(experiment->config, output_options(out_dir, overwrite), jobs);
    if (out) *out = result.release();
  });
}

asvgd_status asvgd_experiment_compare(const asvgd_experiment* experiment,
                                      const char* const* schedules, size_t count,
                                      const char* out_dir, int overwrite, unsigned jobs,
                                      asvgd_result** out) {
  return guarded([&] {
    require(experiment, "experiment");
    const ExperimentConfig& c = experiment->config;
    std::vector<std::string> names = c.compare_schedules;
    if (schedules) names.assign(schedules, schedules + count);
    if (names.empty()) throw ValidationError("compare needs at least one schedule");
    auto result = std::make_unique<asvgd_result>();
    result->entries = compare_schedules(c, schedules_from_names(c, names),
                                        output_options(out_dir, overwrite), jobs);
    if (out) *out = result.release();
  });
}

void asvgd_result_destroy(asvgd_result* result) { delete result; }

size_t asvgd_result_count(const asvgd_result* result) {
  return result ? result->entries.size() : 0;
}

const char* asvgd_result_label(const asvgd_result* result, size_t index) {
  if (!result || index >= result->entries.size()) return nullptr;
  return result->entries[index].label.c_str();
}

asvgd_status asvgd_result_final(const asvgd_result* result, size_t index,
                                asvgd_final_stats* stats) {
  return guarded([&] {
    require(stats, "stats");
    const ExperimentResult& r = entry(result, index).result;
    const DiagnosticsRecord& rec = r.final_record();
    *stats = {rec.iteration, rec.gamma, rec.mmd2, rec.modes_covered, r.mode_count,
              r.wall_seconds};
  });
}

asvgd_status asvgd_result_fractions(const asvgd_result* result, size_t index,
                                    double* fractions) {
  return guarded([&] {
    require(fractions, "fractions");
    const auto& f = entry(result, index).result.final_record().mode_fractions;
    std::copy(f.begin(), f.end(), fractions);
  });
}

}  // extern "C"
