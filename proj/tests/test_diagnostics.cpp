#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "diagnostics.hpp"
#include "helpers.hpp"

using namespace asvgd;
using testing::to_matrix;

TEST_CASE("mmd2 hand values") {
  const Matrix zeros{{0.0}, {0.0}};
  CHECK(mmd2_unbiased(zeros, zeros, RbfKernel(1.0)) == doctest::Approx(0.0).epsilon(1e-15));
  const Matrix x{{0.0}, {1.0}};
  CHECK(mmd2_unbiased(x, x, RbfKernel(1.0)) ==
        doctest::Approx(std::exp(-1.0) - 1.0).epsilon(1e-15));
  CHECK(mmd2_unbiased(x, x, RbfKernel(1.0)) == doctest::Approx(-0.632121).epsilon(1e-6));
}

TEST_CASE("mmd2 matches the double-loop oracle") {
  std::mt19937_64 rng(44);
  std::uniform_int_distribution<int> size(2, 20);
  for (std::size_t d : {1u, 2u, 7u}) {
    for (int rep = 0; rep < 30; ++rep) {
      const auto a = testing::random_rows(rng, size(rng), d);
      const auto b = testing::random_rows(rng, size(rng), d, -3.0, 6.0);
      const double h = 0.3 + rep * 0.4;
      const double got = mmd2_unbiased(to_matrix(a), to_matrix(b), RbfKernel(h));
      CHECK(std::abs(got - oracle::mmd2(a, b, h)) <= 1e-12);
      CHECK(std::abs(got - mmd2_unbiased(to_matrix(b), to_matrix(a), RbfKernel(h))) <= 1e-14);

      oracle::Rows pooled = a;
      pooled.insert(pooled.end(), b.begin(), b.end());
      const double hm = oracle::median_bandwidth(pooled);
      CHECK(std::abs(mmd2_unbiased(to_matrix(a), to_matrix(b)) - oracle::mmd2(a, b, hm)) <= 1e-12);
    }
  }
}

TEST_CASE("mmd2 Monte-Carlo behaviour") {
  const auto target = irregular();
  const Matrix x = target.sample(500, 1);
  const Matrix y = target.sample(500, 2);
  CHECK(std::abs(mmd2_unbiased(x, y)) <= 0.02);

  const GaussianMixture near({{1.0, {0.0}, 1.0}});
  const GaussianMixture far({{1.0, {10.0}, 1.0}});
  CHECK(mmd2_unbiased(near.sample(500, 3), far.sample(500, 4)) >= 0.5);
}

TEST_CASE("mmd2 errors") {
  const Matrix one{{0.0}};
  const Matrix two{{0.0}, {1.0}};
  CHECK_THROWS_AS(mmd2_unbiased(one, two), ValidationError);
  CHECK_THROWS_AS(mmd2_unbiased(two, one), ValidationError);
  CHECK_THROWS_AS(mmd2_unbiased(two, Matrix{{0.0, 1.0}, {1.0, 1.0}}), ValidationError);
}

TEST_CASE("assign_modes") {
  const GaussianMixture m({{1.0, {-1.0, 0.0}, 1.0}, {1.0, {1.0, 0.0}, 1.0}, {1.0, {0.0, 5.0}, 1.0}});
  const Matrix x{{-1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {0.2, 4.0}};
  CHECK(assign_modes(x, m) == std::vector<std::size_t>{0, 1, 0, 2});
  CHECK_THROWS_AS(assign_modes(Matrix{{0.0}}, m), ValidationError);

  std::mt19937_64 rng(6);
  const auto rm = testing::random_mixture(rng, 3, 6);
  const auto rows = testing::random_rows(rng, 200, 3, -8.0, 8.0);
  const auto labels = assign_modes(to_matrix(rows), rm.mixture);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < rm.oracle.size(); ++k) {
      if (oracle::sq_dist(rows[i], rm.oracle[k].mean) < oracle::sq_dist(rows[i], rm.oracle[best].mean)) {
        best = k;
      }
    }
    CHECK(labels[i] == best);
  }

  // joint translation
  const Point v{10.0, -4.0, 2.0};
  std::vector<MixtureComponent> moved;
  for (auto c : rm.mixture.components()) {
    for (int j = 0; j < 3; ++j) c.mean[j] += v[j];
    moved.push_back(c);
  }
  Matrix shifted = to_matrix(rows);
  for (Eigen::Index i = 0; i < shifted.rows(); ++i) {
    for (int j = 0; j < 3; ++j) shifted(i, j) += v[j];
  }
  CHECK(assign_modes(shifted, GaussianMixture(moved)) == labels);
}

TEST_CASE("coverage_stats") {
  const auto g = grid16();
  Matrix collapsed(10, 2);
  for (int i = 0; i < 10; ++i) {
    collapsed(i, 0) = g.component(0).mean[0];
    collapsed(i, 1) = g.component(0).mean[1];
  }
  const CoverageStats c = coverage_stats(collapsed, g);
  CHECK(c.modes_covered == 1);
  CHECK(c.mode_fractions[0] == 1.0);
  for (std::size_t k = 1; k < 16; ++k) CHECK(c.mode_fractions[k] == 0.0);

  Matrix one_each(16, 2);
  for (int k = 0; k < 16; ++k) {
    one_each(k, 0) = g.component(k).mean[0];
    one_each(k, 1) = g.component(k).mean[1];
  }
  const CoverageStats all = coverage_stats(one_each, g);
  CHECK(all.modes_covered == 16);
  for (double f : all.mode_fractions) CHECK(f == doctest::Approx(1.0 / 16));

  // radius boundary: 2 sigma = 1.0 from the mean
  const GaussianMixture single({{1.0, {0.0}, 0.5}});
  CHECK(coverage_stats(Matrix{{0.99}}, single).modes_covered == 1);
  CHECK(coverage_stats(Matrix{{1.01}}, single).modes_covered == 0);
  CHECK_THROWS_AS(coverage_stats(Matrix{{0.0}}, single, 0.0), ValidationError);
}

TEST_CASE("coverage fractions recover weights of exact samples") {
  const auto target = irregular();
  const CoverageStats c = coverage_stats(target.sample(10000, 12), target);
  for (std::size_t k = 0; k < target.size(); ++k) {
    CHECK(std::abs(c.mode_fractions[k] - target.component(k).weight) <= 0.02);
  }
}

TEST_CASE("coverage properties") {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 20; ++rep) {
    const auto m = testing::random_mixture(rng, 2, 5);
    const Matrix x = to_matrix(testing::random_rows(rng, 40, 2, -6.0, 6.0));
    std::size_t prev = 0;
    for (double r : {0.1, 0.5, 1.0, 2.0, 3.0, 10.0}) {
      const CoverageStats c = coverage_stats(x, m.mixture, r);
      CHECK(c.modes_covered >= prev);
      CHECK(c.modes_covered <= m.mixture.size());
      prev = c.modes_covered;
      CHECK(std::accumulate(c.mode_fractions.begin(), c.mode_fractions.end(), 0.0) ==
            doctest::Approx(1.0));
      for (double f : c.mode_fractions) CHECK(f >= 0.0);
    }
  }
}

TEST_CASE("distance histograms") {
  const auto g = grid16();
  Matrix collapsed = Matrix::Zero(8, 2);
  collapsed.col(0).setConstant(g.component(0).mean[0]);
  collapsed.col(1).setConstant(g.component(0).mean[1]);
  const auto hs = distance_histogram(collapsed, g, 10);
  REQUIRE(hs.size() == 16);
  CHECK(hs[0].counts[0] == 8);
  for (const auto& h : hs) {
    CHECK(h.bin_edges.size() == 11);
    CHECK(h.counts.size() == 10);
    CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}) == 8);
  }

  // chi distribution: a d-dim standard gaussian sits near sqrt(d - 1/2) from its mean
  const std::size_t d = 50;
  const GaussianMixture iso({{1.0, Point(d, 0.0), 1.0}});
  const auto h = distance_histogram(iso.sample(4000, 3), iso, 60, 15.0);
  const auto peak = std::max_element(h[0].counts.begin(), h[0].counts.end()) - h[0].counts.begin();
  const double centre = 0.5 * (h[0].bin_edges[peak] + h[0].bin_edges[peak + 1]);
  CHECK(std::abs(centre - std::sqrt(d - 0.5)) <= 0.5);
  CHECK(std::accumulate(h[0].counts.begin(), h[0].counts.end(), std::size_t{0}) == 4000);

  // values beyond an explicit range land in the last bin
  const auto clipped = distance_histogram(Matrix{{100.0, 0.0}}, irregular(), 4, 1.0);
  CHECK(clipped[0].counts.back() == 1);
}
