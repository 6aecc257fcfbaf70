#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "schedules.hpp"

using namespace asvgd;

TEST_CASE("golden gamma values") {
  const AnnealingSchedule linear(LinearSchedule{}, 101);
  CHECK(std::abs(linear.gamma(50) - 0.5) <= 1e-12);

  const AnnealingSchedule hyper(HyperbolicSchedule{1.0}, 100);
  CHECK(std::abs(hyper.unclamped_gamma(100.0) - std::tanh(1.3)) <= 1e-12);
  CHECK(std::abs(hyper.unclamped_gamma(100.0) - 0.861723) <= 1e-6);

  const AnnealingSchedule cyc(CyclicalSchedule{5, 2.0}, 100);
  CHECK(std::abs(cyc.gamma(30) - 0.25) <= 1e-12);
  CHECK(cyc.cycle_length() == 20);

  const AnnealingSchedule one = AnnealingSchedule::none(37);
  for (std::size_t t = 0; t < 37; ++t) CHECK(one.gamma(t) == 1.0);
}

TEST_CASE("hand-evaluated formulas before the clamp window") {
  const std::size_t T = 1000;
  const AnnealingSchedule hyper(HyperbolicSchedule{5.0}, T);
  const AnnealingSchedule cyc(CyclicalSchedule{3, 1.5}, T);
  const AnnealingSchedule lin(LinearSchedule{}, T);
  for (std::size_t t : {0u, 1u, 123u, 500u, 901u}) {
    CHECK(hyper.gamma(t) == doctest::Approx(std::tanh(std::pow(1.3 * t / 1000.0, 5.0))));
    CHECK(cyc.gamma(t) == doctest::Approx(std::pow((t % 334) / 334.0, 1.5)));
    CHECK(lin.gamma(t) == doctest::Approx(t / 999.0));
  }
  const AnnealingSchedule half(ConstantSchedule{0.5}, T);
  CHECK(half.gamma(0) == 0.5);
  CHECK(half.gamma(949) == 0.5);
  CHECK(half.gamma(950) == 1.0);
}

TEST_CASE("clamp window") {
  const AnnealingSchedule cyc(CyclicalSchedule{5, 2.0}, 100);
  CHECK(cyc.clamp_start() == 95);
  CHECK(cyc.gamma(94) < 1.0);
  for (std::size_t t = 95; t < 100; ++t) CHECK(cyc.gamma(t) == 1.0);

  const AnnealingSchedule no_clamp(CyclicalSchedule{5, 2.0}, 100, 0.0);
  CHECK(no_clamp.clamp_start() == 99);
  CHECK(no_clamp.gamma(99) == 1.0);
  CHECK(no_clamp.gamma(98) < 1.0);

  const AnnealingSchedule tiny(HyperbolicSchedule{}, 1);
  CHECK(tiny.gamma(0) == 1.0);
}

TEST_CASE("schedule errors") {
  const AnnealingSchedule lin(LinearSchedule{}, 10);
  CHECK_THROWS_AS(lin.gamma(10), ValidationError);
  CHECK_THROWS_AS(AnnealingSchedule(LinearSchedule{}, 0), ValidationError);
  CHECK_THROWS_AS(AnnealingSchedule(LinearSchedule{}, 10, 1.0), ValidationError);
  CHECK_THROWS_AS(AnnealingSchedule(LinearSchedule{}, 10, -0.1), ValidationError);
  CHECK_THROWS_AS(AnnealingSchedule(HyperbolicSchedule{0.0}, 10), ValidationError);
  CHECK_THROWS_AS(AnnealingSchedule(CyclicalSchedule{0, 2.0}, 10), ValidationError);
  CHECK_THROWS_AS(AnnealingSchedule(ConstantSchedule{1.5}, 10), ValidationError);
  CHECK_THROWS_AS(schedule_family_from_name("exponential"), ValidationError);
}

TEST_CASE("family names") {
  CHECK(std::holds_alternative<ConstantSchedule>(schedule_family_from_name("none")));
  CHECK(std::holds_alternative<LinearSchedule>(schedule_family_from_name("linear")));
  CHECK(std::holds_alternative<HyperbolicSchedule>(schedule_family_from_name("hyperbolic")));
  const auto cyc = schedule_family_from_name("cyclical", 7);
  REQUIRE(std::holds_alternative<CyclicalSchedule>(cyc));
  CHECK(std::get<CyclicalSchedule>(cyc).cycles == 7);
  CHECK(AnnealingSchedule::none(5).family_name() == "none");
  CHECK(AnnealingSchedule(CyclicalSchedule{}, 5).family_name() == "cyclical");
}

TEST_CASE("schedule invariants over many configurations") {
  const ScheduleFamily families[] = {ConstantSchedule{0.3},   LinearSchedule{},
                                     HyperbolicSchedule{1.0}, HyperbolicSchedule{5.0},
                                     CyclicalSchedule{1, 2.0}, CyclicalSchedule{5, 2.0},
                                     CyclicalSchedule{7, 0.5}};
  for (const auto& fam : families) {
    for (std::size_t T : {1u, 2u, 3u, 17u, 100u, 1001u}) {
      for (double f : {0.0, 0.05, 0.5}) {
        const AnnealingSchedule s(fam, T, f);
        const std::size_t clamp = static_cast<std::size_t>(std::ceil((1.0 - f) * T));
        for (std::size_t t = 0; t < T; ++t) {
          const double g = s.gamma(t);
          CHECK(g >= 0.0);
          CHECK(g <= 1.0);
          if (t >= clamp) CHECK(g == 1.0);
        }
        CHECK(s.gamma(T - 1) == 1.0);
      }
    }
  }
}

TEST_CASE("linear and hyperbolic are monotone") {
  for (std::size_t T : {10u, 100u, 5000u}) {
    const AnnealingSchedule lin(LinearSchedule{}, T);
    const AnnealingSchedule hyp(HyperbolicSchedule{}, T);
    for (std::size_t t = 1; t < T; ++t) {
      CHECK(lin.gamma(t) >= lin.gamma(t - 1));
      CHECK(hyp.gamma(t) >= hyp.gamma(t - 1));
    }
  }
}

TEST_CASE("cyclical periodicity and sharpening in p") {
  const std::size_t T = 3000;
  const AnnealingSchedule s(CyclicalSchedule{5, 2.0}, T);
  const std::size_t L = s.cycle_length();
  CHECK(L == 600);
  for (std::size_t t = 0; t + L < s.clamp_start(); t += 7) CHECK(s.gamma(t) == s.gamma(t + L));

  for (std::size_t t : {150u, 300u, 599u, 1234u}) {
    double prev = 2.0;
    for (double p : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      const double g = AnnealingSchedule(CyclicalSchedule{5, p}, T).gamma(t);
      CHECK(g < prev);
      prev = g;
    }
  }
}
