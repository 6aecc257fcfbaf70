#pragma once

#include <random>
#include <vector>

#include "matrix.hpp"
#include "oracles.hpp"
#include "targets.hpp"

namespace testing {

inline asvgd::Matrix to_matrix(const oracle::Rows& rows) {
  asvgd::Matrix m(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

inline oracle::Rows to_rows(const asvgd::Matrix& m) {
  oracle::Rows rows(m.rows(), oracle::Vec(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
  }
  return rows;
}

inline oracle::Rows random_rows(std::mt19937_64& rng, std::size_t n, std::size_t d,
                                double lo = -5.0, double hi = 5.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  oracle::Rows rows(n, oracle::Vec(d));
  for (auto& r : rows) {
    for (double& v : r) v = u(rng);
  }
  return rows;
}

struct RandomMixture {
  std::vector<oracle::Component> oracle;
  asvgd::GaussianMixture mixture;
};

inline RandomMixture random_mixture(std::mt19937_64& rng, std::size_t d, std::size_t k = 3) {
  std::uniform_real_distribution<double> w(0.1, 1.0);
  std::uniform_real_distribution<double> s(0.5, 2.0);
  RandomMixture out;
  std::vector<asvgd::MixtureComponent> comps;
  const auto means = random_rows(rng, k, d, -4.0, 4.0);
  for (std::size_t i = 0; i < k; ++i) {
    const double weight = w(rng);
    const double sigma = s(rng);
    out.oracle.push_back({weight, means[i], sigma});
    comps.push_back({weight, means[i], sigma});
  }
  out.mixture = asvgd::GaussianMixture(std::move(comps));
  return out;
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace testing
