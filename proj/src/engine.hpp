#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "kernels.hpp"
#include "matrix.hpp"
#include "schedules.hpp"
#include "targets.hpp"

namespace asvgd {

/// The empirical measure q_t: n particles in d dimensions.
struct ParticleSet {
  Matrix positions;
  std::size_t iteration = 0;

  std::size_t count() const { return static_cast<std::size_t>(positions.rows()); }
  std::size_t dimension() const { return static_cast<std::size_t>(positions.cols()); }
};

struct InitSpec {
  Point mean;
  double scale = 1.0;  // standard deviation of the isotropic Gaussian

  bool operator==(const InitSpec&) const = default;
};

struct RunConfig {
  GaussianMixture target;
  KernelSpec kernel;
  AnnealingSchedule schedule;
  double step_size = 0.1;
  std::size_t total_steps = 0;
  std::size_t particle_count = 1;
  InitSpec init;
  std::uint64_t seed = 0;  // drives the initial draw
  std::size_t checkpoint_every = 1;

  void validate() const;
};

/// n i.i.d. draws from N(init.mean, init.scale^2 I).
ParticleSet init_particles(const RunConfig& config);

// Driving and repulsive parts of the SVGD direction, kept apart for
// diagnostics. Row i of `driving` is (gamma/n) sum_j k(x_j, x_i) score(x_j),
// row i of `repulsive` is (1/n) sum_j grad_{x_j} k(x_j, x_i).
struct DirectionTerms {
  Matrix driving;
  Matrix repulsive;

  Matrix total() const { return driving + repulsive; }
};

DirectionTerms direction_terms(const Matrix& positions, const GaussianMixture& target,
                               const RbfKernel& kernel, double gamma);

// Overload reusing a precomputed pairwise squared distance matrix.
DirectionTerms direction_terms(const Matrix& positions, const Matrix& squared_distances,
                               const GaussianMixture& target, const RbfKernel& kernel,
                               double gamma);

/// Annealed SVGD direction; gamma = 1 gives the standard update.
Matrix update_direction(const ParticleSet& particles, const GaussianMixture& target,
                        const RbfKernel& kernel, double gamma);

/// One synchronous step at t = particles.iteration. A median-heuristic
/// bandwidth is re-resolved from the pre-step positions.
ParticleSet step(const ParticleSet& particles, const GaussianMixture& target,
                 const KernelSpec& kernel, const AnnealingSchedule& schedule, double step_size);

struct Snapshot {
  std::size_t iteration = 0;
  double gamma = 1.0;
  Matrix positions;
};

// Called at t = 0, every checkpoint_every steps and at t = T. `gamma` is
// gamma(min(t, T - 1)), or 1 for an empty run.
using Observer = std::function<void(std::size_t iteration, double gamma, const ParticleSet&)>;

struct RunResult {
  ParticleSet final_state;
  std::vector<Snapshot> checkpoints;
};

struct RunOptions {
  bool retain_snapshots = true;
};

RunResult run(const RunConfig& config, const std::vector<Observer>& observers = {},
              RunOptions options = {});

}  // namespace asvgd
