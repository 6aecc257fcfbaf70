#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace asvgd {

// Row-major so that each particle is a contiguous d-vector.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Point = std::vector<double>;

inline std::span<const double> row_span(const Matrix& m, Eigen::Index i) {
  return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}

inline std::span<double> row_span(Matrix& m, Eigen::Index i) {
  return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}

inline double squared_distance(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double diff = x[k] - y[k];
    acc += diff * diff;
  }
  return acc;
}

inline bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

inline void require_same_dimension(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw ValidationError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                          " vs " + std::to_string(b) + ")");
  }
}

}  // namespace asvgd
