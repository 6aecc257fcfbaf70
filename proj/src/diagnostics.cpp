#include "diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace asvgd {

namespace {

void check_samples(const Matrix& x, const Matrix& y) {
  if (x.rows() < 2 || y.rows() < 2) {
    throw ValidationError("mmd2: each sample needs at least 2 points (got " +
                          std::to_string(x.rows()) + " and " + std::to_string(y.rows()) + ")");
  }
  require_same_dimension(static_cast<std::size_t>(x.cols()), static_cast<std::size_t>(y.cols()),
                         "mmd2");
  if (!all_finite(x) || !all_finite(y)) throw ValidationError("mmd2: non-finite sample");
}

// Sum of k over the off-diagonal of a square block of squared distances.
double off_diagonal_sum(const Matrix& d2, Eigen::Index offset, Eigen::Index size,
                        const RbfKernel& kernel) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = i + 1; j < size; ++j) {
      acc += kernel.from_squared_distance(d2(offset + i, offset + j));
    }
  }
  return 2.0 * acc;
}

double mmd2_from_pooled(const Matrix& pooled_d2, Eigen::Index n, Eigen::Index m,
                        const RbfKernel& kernel) {
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  const double xx = off_diagonal_sum(pooled_d2, 0, n, kernel) / (dn * (dn - 1.0));
  const double yy = off_diagonal_sum(pooled_d2, n, m, kernel) / (dm * (dm - 1.0));
  double xy = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) xy += kernel.from_squared_distance(pooled_d2(i, n + j));
  }
  return xx + yy - 2.0 * xy / (dn * dm);
}

Matrix pooled(const Matrix& x, const Matrix& y) {
  Matrix all(x.rows() + y.rows(), x.cols());
  all.topRows(x.rows()) = x;
  all.bottomRows(y.rows()) = y;
  return all;
}

}  // namespace

double mmd2_unbiased(const Matrix& x, const Matrix& y, const RbfKernel& kernel) {
  check_samples(x, y);
  return mmd2_from_pooled(pairwise_squared_distances(pooled(x, y)), x.rows(), y.rows(), kernel);
}

double mmd2_unbiased(const Matrix& x, const Matrix& y, const KernelSpec& spec) {
  check_samples(x, y);
  spec.validate();
  const Matrix d2 = pairwise_squared_distances(pooled(x, y));
  return mmd2_from_pooled(d2, x.rows(), y.rows(), resolve_kernel_from_distances(spec, d2));
}

std::vector<std::size_t> assign_modes(const Matrix& particles, const GaussianMixture& mixture) {
  require_same_dimension(static_cast<std::size_t>(particles.cols()), mixture.dimension(),
                         "assign_modes");
  std::vector<std::size_t> labels(static_cast<std::size_t>(particles.rows()));
  for (Eigen::Index i = 0; i < particles.rows(); ++i) {
    const auto x = row_span(particles, i);
    std::size_t best = 0;
    double best_d2 = squared_distance(x, mixture.component(0).mean);
    for (std::size_t k = 1; k < mixture.size(); ++k) {
      const double d2 = squared_distance(x, mixture.component(k).mean);
      if (d2 < best_d2) {
        best_d2 = d2;
        best = k;
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
  }
  return labels;
}

CoverageStats coverage_stats(const Matrix& particles, const GaussianMixture& mixture,
                             double radius_multiplier) {
  if (!(radius_multiplier > 0.0)) {
    throw ValidationError("coverage radius multiplier must be positive");
  }
  const auto labels = assign_modes(particles, mixture);
  CoverageStats stats;
  stats.mode_fractions.assign(mixture.size(), 0.0);
  if (labels.empty()) return stats;

  std::vector<std::size_t> counts(mixture.size(), 0);
  for (std::size_t label : labels) ++counts[label];
  const double n = static_cast<double>(labels.size());
  for (std::size_t k = 0; k < mixture.size(); ++k) stats.mode_fractions[k] = counts[k] / n;

  for (std::size_t k = 0; k < mixture.size(); ++k) {
    const auto& c = mixture.component(k);
    const double radius2 = std::pow(radius_multiplier * c.sigma, 2);
    for (Eigen::Index i = 0; i < particles.rows(); ++i) {
      if (squared_distance(row_span(particles, i), c.mean) <= radius2) {
        ++stats.modes_covered;
        break;
      }
    }
  }
  return stats;
}

std::vector<DistanceHistogram> distance_histogram(const Matrix& particles,
                                                  const GaussianMixture& mixture,
                                                  std::size_t bins, double max_distance) {
  if (bins == 0) throw ValidationError("distance histogram needs at least one bin");
  require_same_dimension(static_cast<std::size_t>(particles.cols()), mixture.dimension(),
                         "distance_histogram");
  const std::size_t modes = mixture.size();
  Matrix distances(particles.rows(), static_cast<Eigen::Index>(modes));
  for (Eigen::Index i = 0; i < particles.rows(); ++i) {
    for (std::size_t k = 0; k < modes; ++k) {
      distances(i, static_cast<Eigen::Index>(k)) =
          std::sqrt(squared_distance(row_span(particles, i), mixture.component(k).mean));
    }
  }
  double upper = max_distance;
  if (!(upper > 0.0)) upper = distances.size() > 0 ? distances.maxCoeff() : 0.0;
  if (!(upper > 0.0)) upper = 1.0;  // every particle sits on every mean

  std::vector<double> edges(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) edges[b] = upper * static_cast<double>(b) / bins;

  std::vector<DistanceHistogram> out;
  for (std::size_t k = 0; k < modes; ++k) {
    DistanceHistogram hist{k, edges, std::vector<std::size_t>(bins, 0)};
    for (Eigen::Index i = 0; i < particles.rows(); ++i) {
      const double r = distances(i, static_cast<Eigen::Index>(k));
      auto b = static_cast<std::size_t>(r / upper * static_cast<double>(bins));
      ++hist.counts[std::min(b, bins - 1)];
    }
    out.push_back(std::move(hist));
  }
  return out;
}

}  // namespace asvgd
