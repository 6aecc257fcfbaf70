#pragma once

#include <cstddef>
#include <vector>

#include "kernels.hpp"
#include "matrix.hpp"
#include "targets.hpp"

namespace asvgd {

/// Unbiased (U-statistic) estimate of MMD^2 between the rows of x and y.
/// Can be negative.
double mmd2_unbiased(const Matrix& x, const Matrix& y, const RbfKernel& kernel);

/// As above with the bandwidth resolved on the pooled sample x u y.
double mmd2_unbiased(const Matrix& x, const Matrix& y, const KernelSpec& spec = {});

/// Index of the nearest component mean for every particle. Ties go to the
/// lowest index.
std::vector<std::size_t> assign_modes(const Matrix& particles, const GaussianMixture& mixture);

struct CoverageStats {
  std::size_t modes_covered = 0;
  std::vector<double> mode_fractions;
};

inline constexpr double kDefaultCoverageRadius = 2.0;

// A mode counts as covered when some particle lies within
// radius_multiplier * sigma_k of its mean. Fractions come from assign_modes.
CoverageStats coverage_stats(const Matrix& particles, const GaussianMixture& mixture,
                             double radius_multiplier = kDefaultCoverageRadius);

struct DistanceHistogram {
  std::size_t mode_index = 0;
  std::vector<double> bin_edges;  // bins + 1 entries
  std::vector<std::size_t> counts;
};

inline constexpr std::size_t kDefaultHistogramBins = 50;

/// Histogram of |x_i - mu_k| over all particles, one per component. All
/// histograms share uniform edges on [0, max_distance]; a non-positive
/// max_distance selects the largest observed distance.
std::vector<DistanceHistogram> distance_histogram(const Matrix& particles,
                                                  const GaussianMixture& mixture,
                                                  std::size_t bins = kDefaultHistogramBins,
                                                  double max_distance = 0.0);

struct DiagnosticsRecord {
  std::size_t iteration = 0;
  double gamma = 1.0;
  double mmd2 = 0.0;  // NaN when not computed
  std::size_t modes_covered = 0;
  std::vector<double> mode_fractions;
};

}  // namespace asvgd
