#include "targets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "random.hpp"

namespace asvgd {

GaussianMixture::GaussianMixture(std::vector<MixtureComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw ValidationError("mixture needs at least one component");
  dimension_ = components_.front().mean.size();
  if (dimension_ == 0) throw ValidationError("mixture component means must be non-empty");

  double total = 0.0;
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const auto& c = components_[k];
    const std::string where = "component " + std::to_string(k);
    if (c.mean.size() != dimension_) {
      throw ValidationError(where + ": mean has dimension " + std::to_string(c.mean.size()) +
                            ", expected " + std::to_string(dimension_));
    }
    if (!all_finite(c.mean)) throw ValidationError(where + ": non-finite mean");
    if (!(c.sigma > 0.0) || !std::isfinite(c.sigma)) {
      throw ValidationError(where + ": sigma must be positive");
    }
    if (!(c.weight > 0.0) || !std::isfinite(c.weight)) {
      throw ValidationError(where + ": weight must be positive");
    }
    total += c.weight;
  }

  const double d = static_cast<double>(dimension_);
  const double half_log_two_pi = 0.5 * std::log(2.0 * std::numbers::pi);
  for (auto& c : components_) {
    c.weight /= total;
    log_weight_norm_.push_back(std::log(c.weight) - d * std::log(c.sigma) - d * half_log_two_pi);
    inv_var_.push_back(1.0 / (c.sigma * c.sigma));
  }
}

void GaussianMixture::check_point(std::span<const double> x) const {
  require_same_dimension(x.size(), dimension_, "mixture evaluation");
  if (!all_finite(x)) throw ValidationError("mixture evaluation: non-finite point");
}

double GaussianMixture::component_log_terms(std::span<const double> x,
                                            std::span<double> terms) const {
  double max_term = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < components_.size(); ++k) {
    terms[k] = log_weight_norm_[k] - 0.5 * inv_var_[k] * squared_distance(x, components_[k].mean);
    max_term = std::max(max_term, terms[k]);
  }
  return max_term;
}

double GaussianMixture::log_density(std::span<const double> x) const {
  check_point(x);
  std::vector<double> terms(components_.size());
  const double max_term = component_log_terms(x, terms);
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - max_term);
  return max_term + std::log(sum);
}

void GaussianMixture::score_into(std::span<const double> x, std::span<double> out) const {
  check_point(x);
  require_same_dimension(out.size(), dimension_, "score output");
  std::vector<double> terms(components_.size());
  const double max_term = component_log_terms(x, terms);
  double norm = 0.0;
  for (double& t : terms) {
    t = std::exp(t - max_term);
    norm += t;
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const double coeff = terms[k] / norm * inv_var_[k];
    const auto& mu = components_[k].mean;
    for (std::size_t j = 0; j < dimension_; ++j) out[j] += coeff * (mu[j] - x[j]);
  }
}

Point GaussianMixture::score(std::span<const double> x) const {
  Point out(x.size());
  score_into(x, out);
  return out;
}

void GaussianMixture::score_rows(const Matrix& particles, Matrix& out) const {
  out.resize(particles.rows(), particles.cols());
  std::vector<double> terms(components_.size());
  for (Eigen::Index i = 0; i < particles.rows(); ++i) {
    const auto x = row_span(particles, i);
    const double max_term = component_log_terms(x, terms);
    double norm = 0.0;
    for (double& t : terms) {
      t = std::exp(t - max_term);
      norm += t;
    }
    auto o = row_span(out, i);
    std::fill(o.begin(), o.end(), 0.0);
    for (std::size_t k = 0; k < components_.size(); ++k) {
      const double coeff = terms[k] / norm * inv_var_[k];
      const auto& mu = components_[k].mean;
      for (std::size_t j = 0; j < dimension_; ++j) o[j] += coeff * (mu[j] - x[j]);
    }
  }
}

Matrix GaussianMixture::sample(std::size_t count, std::uint64_t seed) const {
  Rng rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const auto& c : components_) cumulative.push_back(acc += c.weight);

  Matrix out(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(dimension_));
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double u = uniform(rng) * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const auto k = std::min<std::size_t>(it - cumulative.begin(), components_.size() - 1);
    const auto& c = components_[k];
    for (std::size_t j = 0; j < dimension_; ++j) out(i, j) = c.mean[j] + c.sigma * normal(rng);
  }
  return out;
}

GaussianMixture univariate5() {
  std::vector<MixtureComponent> comps;
  for (double mu : {-5.0, -3.5, -2.0, -0.5, 1.0}) comps.push_back({1.0, {mu}, 0.25});
  return GaussianMixture(std::move(comps));
}

GaussianMixture grid16(double spacing) {
  if (!(spacing > 0.0)) throw ValidationError("grid16 spacing must be positive");
  std::vector<MixtureComponent> comps;
  for (int row = 0; row < 4; ++row) {
    for (int col = 0; col < 4; ++col) {
      comps.push_back({1.0, {(row - 1.5) * spacing, (col - 1.5) * spacing}, 0.5});
    }
  }
  return GaussianMixture(std::move(comps));
}

GaussianMixture irregular() {
  return GaussianMixture({
      {0.35, {-2.0, -3.0}, 0.75},
      {0.25, {2.0, 3.0}, 0.75},
      {0.20, {3.0, -2.0}, 0.75},
      {0.15, {-3.0, 2.0}, 0.75},
      {0.05, {0.5, 0.5}, 0.75},
  });
}

GaussianMixture highdim(std::size_t dimension, std::uint64_t seed) {
  if (dimension == 0) throw ValidationError("highdim dimension must be positive");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 2.0);
  std::vector<MixtureComponent> comps;
  for (int k = 0; k < 5; ++k) {
    Point mean(dimension);
    for (double& v : mean) v = normal(rng);
    comps.push_back({1.0, std::move(mean), 1.0});
  }
  return GaussianMixture(std::move(comps));
}

GaussianMixture named_target(std::string_view name, const NamedTargetParams& params) {
  if (name == "univariate5") return univariate5();
  if (name == "grid16") return grid16(params.spacing);
  if (name == "irregular") return irregular();
  if (name == "highdim") return highdim(params.dimension, params.seed);
  throw ValidationError("unknown target '" + std::string(name) +
                        "' (expected univariate5, grid16, irregular or highdim)");
}

}  // namespace asvgd
