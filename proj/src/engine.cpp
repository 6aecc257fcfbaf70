#include "engine.hpp"

#include <cmath>
#include <random>
#include <string>

#include "random.hpp"

namespace asvgd {

void RunConfig::validate() const {
  if (target.size() == 0) throw ValidationError("run config: target is empty");
  kernel.validate();
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    throw ValidationError("run config: step_size must be positive");
  }
  if (particle_count == 0) throw ValidationError("run config: particle_count must be >= 1");
  if (init.mean.size() != target.dimension()) {
    throw ValidationError("run config: init.mean has dimension " +
                          std::to_string(init.mean.size()) + ", target has " +
                          std::to_string(target.dimension()));
  }
  if (!all_finite(init.mean)) throw ValidationError("run config: init.mean is not finite");
  if (!(init.scale >= 0.0) || !std::isfinite(init.scale)) {
    throw ValidationError("run config: init.scale must be non-negative");
  }
  if (checkpoint_every == 0) throw ValidationError("run config: checkpoint_every must be >= 1");
  if (total_steps > 0) {
    schedule.validate();
    if (schedule.total_steps() != total_steps) {
      throw ValidationError("run config: schedule.total_steps (" +
                            std::to_string(schedule.total_steps()) +
                            ") differs from total_steps (" + std::to_string(total_steps) + ")");
    }
    if (checkpoint_every > total_steps) {
      throw ValidationError("run config: checkpoint_every exceeds total_steps");
    }
  }
}

ParticleSet init_particles(const RunConfig& config) {
  const auto n = static_cast<Eigen::Index>(config.particle_count);
  const auto d = static_cast<Eigen::Index>(config.init.mean.size());
  Rng rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ParticleSet set;
  set.positions.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      set.positions(i, j) = config.init.mean[j] + config.init.scale * normal(rng);
    }
  }
  return set;
}

DirectionTerms direction_terms(const Matrix& positions, const Matrix& squared_distances,
                               const GaussianMixture& target, const RbfKernel& kernel,
                               double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw ValidationError("annealing factor must lie in [0, 1], got " + std::to_string(gamma));
  }
  require_same_dimension(static_cast<std::size_t>(positions.cols()), target.dimension(),
                         "update direction");
  const Eigen::Index n = positions.rows();
  const double h = kernel.bandwidth();

  Matrix scores;
  target.score_rows(positions, scores);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!scores.row(i).allFinite()) {
      throw NumericalError("non-finite score at particle " + std::to_string(i));
    }
  }

  // K is symmetric, so sum_j k(x_j, x_i) v_j is row i of K V.
  const Matrix k = (-squared_distances.array() / h).exp().matrix();
  const Eigen::VectorXd k_row_sums = k.rowwise().sum();

  DirectionTerms terms;
  terms.driving.noalias() = k * scores;
  terms.driving *= gamma / static_cast<double>(n);

  // grad_{x_j} k(x_j, x_i) = (2/h) (x_i - x_j) k_ij
  terms.repulsive.noalias() = -(k * positions);
  terms.repulsive += k_row_sums.asDiagonal() * positions;
  terms.repulsive *= 2.0 / (h * static_cast<double>(n));
  return terms;
}

DirectionTerms direction_terms(const Matrix& positions, const GaussianMixture& target,
                               const RbfKernel& kernel, double gamma) {
  return direction_terms(positions, pairwise_squared_distances(positions), target, kernel, gamma);
}

Matrix update_direction(const ParticleSet& particles, const GaussianMixture& target,
                        const RbfKernel& kernel, double gamma) {
  return direction_terms(particles.positions, target, kernel, gamma).total();
}

ParticleSet step(const ParticleSet& particles, const GaussianMixture& target,
                 const KernelSpec& kernel, const AnnealingSchedule& schedule, double step_size) {
  const double gamma = schedule.gamma(particles.iteration);
  const Matrix d2 = pairwise_squared_distances(particles.positions);
  if (!d2.allFinite()) throw NumericalError("pairwise distances overflowed");
  const RbfKernel resolved = resolve_kernel_from_distances(kernel, d2);
  const DirectionTerms terms = direction_terms(particles.positions, d2, target, resolved, gamma);

  ParticleSet next;
  next.positions = particles.positions + step_size * (terms.driving + terms.repulsive);
  next.iteration = particles.iteration + 1;
  return next;
}

RunResult run(const RunConfig& config, const std::vector<Observer>& observers,
              RunOptions options) {
  config.validate();
  RunResult result;
  ParticleSet state = init_particles(config);
  const std::size_t total = config.total_steps;

  auto checkpoint = [&](const ParticleSet& s) {
    const double gamma = total == 0 ? 1.0 : config.schedule.gamma(std::min(s.iteration, total - 1));
    for (const auto& observer : observers) observer(s.iteration, gamma, s);
    if (options.retain_snapshots) result.checkpoints.push_back({s.iteration, gamma, s.positions});
  };

  checkpoint(state);
  for (std::size_t t = 0; t < total; ++t) {
    try {
      state = step(state, config.target, config.kernel, config.schedule, config.step_size);
    } catch (const NumericalError& e) {
      throw NumericalError("step " + std::to_string(t) + ": " + e.what());
    }
    if (!all_finite(state.positions)) {
      throw NumericalError("non-finite particle state after step " + std::to_string(t) +
                           " (step size too large?)");
    }
    if (state.iteration % config.checkpoint_every == 0 || state.iteration == total) {
      checkpoint(state);
    }
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace asvgd
