#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "targets.hpp"

using namespace asvgd;

TEST_CASE("log density values") {
  const GaussianMixture std_normal({{1.0, {0.0}, 1.0}});
  CHECK(std_normal.log_density(Point{0.0}) ==
        doctest::Approx(-0.5 * std::log(2.0 * M_PI)).epsilon(1e-15));

  const GaussianMixture pair({{1.0, {-1.0}, 1.0}, {1.0, {1.0}, 1.0}});
  const double far = pair.log_density(Point{40.0});
  CHECK(std::isfinite(far));
  // exact: log(0.5) - 0.5 log 2pi + log(e^{-39^2/2} + e^{-41^2/2})
  const double expected = std::log(0.5) - 0.5 * std::log(2.0 * M_PI) - 39.0 * 39.0 / 2.0 +
                          std::log1p(std::exp(-(41.0 * 41.0 - 39.0 * 39.0) / 2.0));
  CHECK(far == doctest::Approx(expected).epsilon(1e-14));
  CHECK(std::isfinite(pair.log_density(Point{1e3})));
}

TEST_CASE("log density stays finite on extreme inputs") {
  const GaussianMixture narrow({{0.5, {0.0, 0.0}, 1e-3}, {0.5, {3.0, 3.0}, 1e-3}});
  for (double x : {-1e3, -10.0, 0.0, 1.5, 1e3}) {
    CHECK(std::isfinite(narrow.log_density(Point{x, -x})));
    for (double s : narrow.score(Point{x, -x})) CHECK(std::isfinite(s));
  }
}

TEST_CASE("density integrates to one") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 5; ++rep) {
    const auto m = testing::random_mixture(rng, 1, 4).mixture;
    const double lo = -20.0, hi = 20.0;
    const int n = 200000;
    const double dx = (hi - lo) / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 0.5 : 1.0;
      sum += w * std::exp(m.log_density(Point{lo + i * dx}));
    }
    CHECK(std::abs(sum * dx - 1.0) <= 1e-6);
  }
  // 2-D on a tensor grid
  const auto m2 = testing::random_mixture(rng, 2, 3).mixture;
  const int n = 800;
  const double lo = -14.0, hi = 14.0, dx = (hi - lo) / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double w = ((i == 0 || i == n) ? 0.5 : 1.0) * ((j == 0 || j == n) ? 0.5 : 1.0);
      sum += w * std::exp(m2.log_density(Point{lo + i * dx, lo + j * dx}));
    }
  }
  CHECK(std::abs(sum * dx * dx - 1.0) <= 1e-4);
}

TEST_CASE("score values") {
  const GaussianMixture g({{1.0, {1.0, -2.0}, 2.0}});
  const Point s = g.score(Point{3.0, 0.0});
  CHECK(s[0] == doctest::Approx(-0.5));
  CHECK(s[1] == doctest::Approx(-0.5));
  CHECK(g.score(Point{1.0, -2.0}) == Point{0.0, 0.0});

  const GaussianMixture sym({{1.0, {-2.0}, 0.7}, {1.0, {2.0}, 0.7}});
  CHECK(sym.score(Point{0.0})[0] == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("score matches finite differences and the oracle") {
  std::mt19937_64 rng(8);
  for (std::size_t d : {1u, 2u, 100u}) {
    for (int rep = 0; rep < 100; ++rep) {
      const auto m = testing::random_mixture(rng, d, 1 + rep % 4);
      const Point x = testing::random_rows(rng, 1, d, -6.0, 6.0)[0];
      const Point s = m.mixture.score(x);
      const Point o = oracle::score(m.oracle, x);
      CHECK(m.mixture.log_density(x) ==
            doctest::Approx(oracle::log_density(m.oracle, x)).epsilon(1e-12));
      double worst = 0.0;
      const double step = 1e-5;
      for (std::size_t c = 0; c < d; ++c) {
        CHECK(s[c] == doctest::Approx(o[c]).epsilon(1e-10));
        Point xp = x, xm = x;
        xp[c] += step;
        xm[c] -= step;
        const double fd = (m.mixture.log_density(xp) - m.mixture.log_density(xm)) / (2.0 * step);
        worst = std::max(worst, std::abs(fd - s[c]) / std::max(1.0, std::abs(s[c])));
      }
      CHECK(worst <= 1e-6);
    }
  }
}

TEST_CASE("score_rows agrees with score") {
  std::mt19937_64 rng(4);
  const auto m = testing::random_mixture(rng, 3, 4).mixture;
  const Matrix x = testing::to_matrix(testing::random_rows(rng, 9, 3));
  Matrix out;
  m.score_rows(x, out);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Point s = m.score(row_span(x, i));
    for (int c = 0; c < 3; ++c) CHECK(out(i, c) == doctest::Approx(s[c]).epsilon(1e-14));
  }
}

TEST_CASE("mixture validation") {
  CHECK_THROWS_AS(GaussianMixture(std::vector<MixtureComponent>{}), ValidationError);
  CHECK_THROWS_AS(GaussianMixture({{1.0, {0.0}, 0.0}}), ValidationError);
  CHECK_THROWS_AS(GaussianMixture({{-1.0, {0.0}, 1.0}}), ValidationError);
  CHECK_THROWS_AS(GaussianMixture({{1.0, {NAN}, 1.0}}), ValidationError);
  CHECK_THROWS_AS(GaussianMixture({{1.0, {0.0}, 1.0}, {1.0, {0.0, 1.0}, 1.0}}), ValidationError);
  CHECK_THROWS_AS(GaussianMixture({{1.0, {}, 1.0}}), ValidationError);
  const GaussianMixture m({{3.0, {0.0}, 1.0}, {1.0, {1.0}, 1.0}});
  CHECK(m.component(0).weight == doctest::Approx(0.75));
  CHECK_THROWS_AS(m.log_density(Point{0.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(m.score(Point{NAN}), ValidationError);
}

TEST_CASE("sampling") {
  const GaussianMixture single({{1.0, {2.0, -1.0}, 0.5}});
  const Matrix s = single.sample(100000, 1);
  const Eigen::RowVectorXd mean = s.colwise().mean();
  CHECK(std::abs(mean(0) - 2.0) <= 4 * 0.5 / std::sqrt(1e5));
  CHECK(std::abs(mean(1) + 1.0) <= 4 * 0.5 / std::sqrt(1e5));

  const GaussianMixture skew({{0.9, {-10.0}, 1.0}, {0.1, {10.0}, 1.0}});
  const Matrix t = skew.sample(100000, 2);
  const double frac = (t.array() < 0.0).cast<double>().mean();
  CHECK(std::abs(frac - 0.9) <= 0.01);

  CHECK(skew.sample(50, 9) == skew.sample(50, 9));
  CHECK(skew.sample(50, 9) != skew.sample(50, 10));
  CHECK(skew.sample(0, 1).rows() == 0);
}

TEST_CASE("sample moments match the mixture") {
  std::mt19937_64 rng(17);
  const auto m = testing::random_mixture(rng, 2, 3).mixture;
  const std::size_t count = 200000;
  const Matrix s = m.sample(count, 5);
  for (int c = 0; c < 2; ++c) {
    double mean = 0.0, second = 0.0;
    for (const auto& comp : m.components()) {
      mean += comp.weight * comp.mean[c];
      second += comp.weight * (comp.sigma * comp.sigma + comp.mean[c] * comp.mean[c]);
    }
    const double var = second - mean * mean;
    const double tol = 4.0 / std::sqrt(static_cast<double>(count));
    CHECK(std::abs(s.col(c).mean() - mean) <= tol * std::sqrt(var));
    const double emp_var = (s.col(c).array() - s.col(c).mean()).square().mean();
    CHECK(std::abs(emp_var - var) <= tol * var * 2.0);
  }
}

TEST_CASE("named targets") {
  const auto u = univariate5();
  CHECK(u.size() == 5);
  CHECK(u.dimension() == 1);
  double wsum = 0.0;
  for (std::size_t k = 0; k < 5; ++k) {
    wsum += u.component(k).weight;
    for (std::size_t j = 0; j < k; ++j) CHECK(u.component(k).mean != u.component(j).mean);
  }
  CHECK(wsum == doctest::Approx(1.0));

  const auto g = grid16();
  CHECK(g.size() == 16);
  for (std::size_t k = 0; k < 16; ++k) {
    CHECK(g.component(k).weight == doctest::Approx(1.0 / 16));
    CHECK(g.component(k).sigma == 0.5);
    const auto& mu = g.component(k).mean;
    CHECK(mu[0] == doctest::Approx((static_cast<int>(k / 4) - 1.5) * kGridSpacing));
    CHECK(mu[1] == doctest::Approx((static_cast<int>(k % 4) - 1.5) * kGridSpacing));
  }
  CHECK(grid16(2.0).component(0).mean == Point{-3.0, -3.0});

  const auto irr = irregular();
  CHECK(irr.size() == 5);
  CHECK(irr.dimension() == 2);

  const auto h = highdim(100, 42);
  CHECK(h.size() == 5);
  CHECK(h.dimension() == 100);
  for (const auto& c : h.components()) {
    CHECK(c.sigma == 1.0);
    const double r = std::sqrt(squared_distance(c.mean, Point(100, 0.0)));
    CHECK(r == doctest::Approx(20.0).epsilon(0.25));
  }
  CHECK(highdim(100, 42).components() == h.components());
  CHECK(highdim(100, 43).components() != h.components());

  CHECK(named_target("grid16", {}).size() == 16);
  CHECK(named_target("highdim", {7, 1, 3.0}).dimension() == 7);
  CHECK_THROWS_AS(named_target("banana", {}), ValidationError);
  CHECK_THROWS_AS(highdim(0, 1), ValidationError);
}
