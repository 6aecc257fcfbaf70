#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "matrix.hpp"

namespace asvgd {

struct MixtureComponent {
  double weight = 1.0;
  Point mean;
  double sigma = 1.0;  // isotropic covariance sigma^2 I

  bool operator==(const MixtureComponent&) const = default;
};

/// Isotropic Gaussian mixture target. Weights are normalized on construction
/// and the object is immutable afterwards.
class GaussianMixture {
 public:
  GaussianMixture() = default;
  explicit GaussianMixture(std::vector<MixtureComponent> components);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return components_.size(); }
  const MixtureComponent& component(std::size_t k) const { return components_.at(k); }
  const std::vector<MixtureComponent>& components() const { return components_; }

  /// log sum_k w_k N(x; mu_k, sigma_k^2 I), evaluated with log-sum-exp.
  double log_density(std::span<const double> x) const;

  /// grad log p(x) = sum_k r_k(x) (mu_k - x) / sigma_k^2.
  Point score(std::span<const double> x) const;
  void score_into(std::span<const double> x, std::span<double> out) const;

  // Unchecked row-wise score of a particle matrix; no input validation.
  void score_rows(const Matrix& particles, Matrix& out) const;

  /// Ancestral sampling, deterministic in `seed`.
  Matrix sample(std::size_t count, std::uint64_t seed) const;

 private:
  void check_point(std::span<const double> x) const;
  // Per-component log(w_k) + log N(x; mu_k, sigma_k^2 I); returns the max.
  double component_log_terms(std::span<const double> x, std::span<double> terms) const;

  std::vector<MixtureComponent> components_;
  std::vector<double> log_weight_norm_;  // log w_k - d log sigma_k - d/2 log 2 pi
  std::vector<double> inv_var_;
  std::size_t dimension_ = 0;
};

inline constexpr double kGridSpacing = 3.0;

/// Five 1-D components at -5, -3.5, -2, -0.5, 1 with sigma 0.25, equal weights.
GaussianMixture univariate5();

/// 16 equal-weight components on a 4 x 4 grid centred at the origin,
/// sigma = 0.5. Component index is 4 * row + col with row along x.
GaussianMixture grid16(double spacing = kGridSpacing);

/// 2-D, five unequal-weight components.
GaussianMixture irregular();

/// Five equal-weight components in `dimension` dims, means drawn from
/// N(0, 4 I) with `seed`, sigma = 1.
GaussianMixture highdim(std::size_t dimension, std::uint64_t seed);

struct NamedTargetParams {
  std::size_t dimension = 100;
  std::uint64_t seed = 0;
  double spacing = kGridSpacing;
};

/// Resolves "univariate5", "grid16", "irregular" or "highdim".
GaussianMixture named_target(std::string_view name, const NamedTargetParams& params = {});

}  // namespace asvgd
