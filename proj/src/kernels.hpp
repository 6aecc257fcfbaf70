#pragma once

#include <cstddef>
#include <span>
#include <variant>

#include "matrix.hpp"

namespace asvgd {

struct FixedBandwidth {
  double h = 1.0;
  bool operator==(const FixedBandwidth&) const = default;
};

struct MedianBandwidth {
  bool operator==(const MedianBandwidth&) const = default;
};

using BandwidthPolicy = std::variant<FixedBandwidth, MedianBandwidth>;

inline constexpr double kDefaultBandwidthFloor = 1e-8;

// RBF kernel description. The bandwidth is resolved against a particle set
// before use, see resolve_kernel().
struct KernelSpec {
  BandwidthPolicy policy = MedianBandwidth{};
  double bandwidth_floor = kDefaultBandwidthFloor;

  bool operator==(const KernelSpec&) const = default;
  bool uses_median() const { return std::holds_alternative<MedianBandwidth>(policy); }
  void validate() const;
};

/// RBF kernel k(x, y) = exp(-|x - y|^2 / h) with a resolved bandwidth.
class RbfKernel {
 public:
  explicit RbfKernel(double h);

  double bandwidth() const { return h_; }

  double operator()(std::span<const double> x, std::span<const double> y) const;

  // Gradient with respect to the first argument: -(2/h) (x - y) k(x, y).
  void grad_first(std::span<const double> x, std::span<const double> y,
                  std::span<double> out) const;
  Point grad_first(std::span<const double> x, std::span<const double> y) const;

  // Unchecked evaluation from a precomputed squared distance.
  double from_squared_distance(double d2) const { return std::exp(-d2 / h_); }

 private:
  double h_;
};

/// Symmetric n x n matrix of squared Euclidean distances between rows.
Matrix pairwise_squared_distances(const Matrix& points);

/// n x m matrix of squared distances between rows of a and rows of b.
Matrix cross_squared_distances(const Matrix& a, const Matrix& b);

// Median of the strict upper triangle of a squared distance matrix. For an
// even count the lower-middle element is taken.
double median_of_upper_triangle(const Matrix& squared_distances);

/// h = med^2 / log(n) where med is the median pairwise distance, clamped
/// below by `floor`. Requires n >= 2.
double median_heuristic(const Matrix& particles, double floor = kDefaultBandwidthFloor);

// Same, reusing an already computed distance matrix.
double median_heuristic_from_distances(const Matrix& squared_distances,
                                       double floor = kDefaultBandwidthFloor);

/// Resolves the bandwidth policy against `particles`. A single particle
/// under the median policy yields the floor.
RbfKernel resolve_kernel(const KernelSpec& spec, const Matrix& particles);

RbfKernel resolve_kernel_from_distances(const KernelSpec& spec, const Matrix& squared_distances);

}  // namespace asvgd
