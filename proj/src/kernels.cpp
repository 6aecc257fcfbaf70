#include "kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace asvgd {

void KernelSpec::validate() const {
  if (!(bandwidth_floor > 0.0) || !std::isfinite(bandwidth_floor)) {
    throw ValidationError("kernel.bandwidth_floor must be a positive finite number");
  }
  if (const auto* fixed = std::get_if<FixedBandwidth>(&policy)) {
    if (!(fixed->h > 0.0) || !std::isfinite(fixed->h)) {
      throw ValidationError("kernel.bandwidth must be positive, got " + std::to_string(fixed->h));
    }
  }
}

RbfKernel::RbfKernel(double h) : h_(h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ValidationError("RBF bandwidth must be positive and finite");
  }
}

namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
  require_same_dimension(x.size(), y.size(), "kernel evaluation");
  if (!all_finite(x) || !all_finite(y)) {
    throw ValidationError("kernel evaluation: non-finite input");
  }
}

}  // namespace

double RbfKernel::operator()(std::span<const double> x, std::span<const double> y) const {
  check_pair(x, y);
  return from_squared_distance(squared_distance(x, y));
}

void RbfKernel::grad_first(std::span<const double> x, std::span<const double> y,
                           std::span<double> out) const {
  check_pair(x, y);
  require_same_dimension(x.size(), out.size(), "kernel gradient output");
  const double scale = -2.0 / h_ * from_squared_distance(squared_distance(x, y));
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = scale * (x[k] - y[k]);
}

Point RbfKernel::grad_first(std::span<const double> x, std::span<const double> y) const {
  Point out(x.size());
  grad_first(x, y, out);
  return out;
}

namespace {

// Below this dimension distances are formed from explicit differences, which
// is exact to rounding. Above it the Gram expansion |a|^2 + |b|^2 - 2 a.b
// goes through a matrix product; its cancellation error is ~1e-16 |x|^2.
constexpr Eigen::Index kGramDimension = 16;

void fill_direct(const Matrix& a, const Matrix& b, Matrix& d2, bool symmetric) {
  const Eigen::Index d = a.cols();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double* x = a.data() + i * d;
    const Eigen::Index first = symmetric ? i + 1 : 0;
    for (Eigen::Index j = first; j < b.rows(); ++j) {
      const double* y = b.data() + j * d;
      double acc = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) {
        const double diff = x[k] - y[k];
        acc += diff * diff;
      }
      d2(i, j) = acc;
      if (symmetric) d2(j, i) = acc;
    }
  }
}

}  // namespace

Matrix pairwise_squared_distances(const Matrix& points) {
  const Eigen::Index n = points.rows();
  Matrix d2 = Matrix::Zero(n, n);
  if (points.cols() < kGramDimension) {
    fill_direct(points, points, d2, true);
    return d2;
  }
  const Eigen::VectorXd norms = points.rowwise().squaredNorm();
  d2.noalias() = -2.0 * points * points.transpose();
  d2.colwise() += norms;
  d2.rowwise() += norms.transpose();
  d2 = d2.cwiseMax(0.0);
  // Exact symmetry and a zero diagonal.
  for (Eigen::Index i = 0; i < n; ++i) {
    d2(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) d2(j, i) = d2(i, j);
  }
  return d2;
}

Matrix cross_squared_distances(const Matrix& a, const Matrix& b) {
  require_same_dimension(static_cast<std::size_t>(a.cols()), static_cast<std::size_t>(b.cols()),
                         "cross distances");
  Matrix d2(a.rows(), b.rows());
  if (a.cols() < kGramDimension) {
    fill_direct(a, b, d2, false);
    return d2;
  }
  d2.noalias() = -2.0 * a * b.transpose();
  d2.colwise() += a.rowwise().squaredNorm();
  d2.rowwise() += b.rowwise().squaredNorm().transpose();
  return d2.cwiseMax(0.0);
}

double median_of_upper_triangle(const Matrix& squared_distances) {
  const Eigen::Index n = squared_distances.rows();
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) values.push_back(squared_distances(i, j));
  }
  if (values.empty()) return 0.0;
  // Squaring is monotone, so the median squared distance is the squared
  // median distance.
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

double median_heuristic_from_distances(const Matrix& squared_distances, double floor) {
  const Eigen::Index n = squared_distances.rows();
  if (n < 2) {
    throw ValidationError("median heuristic needs at least 2 particles, got " + std::to_string(n));
  }
  const double med2 = median_of_upper_triangle(squared_distances);
  if (!(med2 > 0.0)) return floor;
  return std::max(med2 / std::log(static_cast<double>(n)), floor);
}

double median_heuristic(const Matrix& particles, double floor) {
  if (particles.rows() < 2) {
    throw ValidationError("median heuristic needs at least 2 particles, got " +
                          std::to_string(particles.rows()));
  }
  if (!all_finite(particles)) throw ValidationError("median heuristic: non-finite particle");
  return median_heuristic_from_distances(pairwise_squared_distances(particles), floor);
}

RbfKernel resolve_kernel_from_distances(const KernelSpec& spec, const Matrix& squared_distances) {
  if (const auto* fixed = std::get_if<FixedBandwidth>(&spec.policy)) {
    return RbfKernel(std::max(fixed->h, spec.bandwidth_floor));
  }
  if (squared_distances.rows() < 2) return RbfKernel(spec.bandwidth_floor);
  return RbfKernel(median_heuristic_from_distances(squared_distances, spec.bandwidth_floor));
}

RbfKernel resolve_kernel(const KernelSpec& spec, const Matrix& particles) {
  if (std::holds_alternative<FixedBandwidth>(spec.policy) || particles.rows() < 2) {
    return resolve_kernel_from_distances(spec, Matrix(particles.rows(), particles.rows()));
  }
  return resolve_kernel_from_distances(spec, pairwise_squared_distances(particles));
}

}  // namespace asvgd
