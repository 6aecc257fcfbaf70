#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>

namespace asvgd {

struct ConstantSchedule {
  double value = 1.0;
};

struct LinearSchedule {};

struct HyperbolicSchedule {
  double p = 5.0;
};

struct CyclicalSchedule {
  int cycles = 5;
  double p = 2.0;
};

using ScheduleFamily =
    std::variant<ConstantSchedule, LinearSchedule, HyperbolicSchedule, CyclicalSchedule>;

inline constexpr double kDefaultFinalClampFraction = 0.05;

/// Annealing factor gamma(t) in [0, 1] scaling the driving force.
///
/// The last `final_clamp_fraction` of the steps (and always the final step)
/// run at gamma = 1 so that the run ends on the untempered target.
class AnnealingSchedule {
 public:
  AnnealingSchedule() = default;
  AnnealingSchedule(ScheduleFamily family, std::size_t total_steps,
                    double final_clamp_fraction = kDefaultFinalClampFraction);

  /// Standard SVGD: gamma = 1 at every step.
  static AnnealingSchedule none(std::size_t total_steps);

  double gamma(std::size_t t) const;

  // The family formula without the final clamp, for real-valued t in [0, T].
  double unclamped_gamma(double t) const;

  // First step index of the clamp window.
  std::size_t clamp_start() const;

  const ScheduleFamily& family() const { return family_; }
  std::size_t total_steps() const { return total_steps_; }
  double final_clamp_fraction() const { return final_clamp_fraction_; }

  // Length of one cycle, ceil(T / C). Only meaningful for the cyclical family.
  std::size_t cycle_length() const;

  std::string family_name() const;

  void validate() const;

 private:
  ScheduleFamily family_ = ConstantSchedule{};
  std::size_t total_steps_ = 1;
  double final_clamp_fraction_ = kDefaultFinalClampFraction;
};

/// Parses "none" / "constant", "linear", "hyperbolic", "cyclical" into a
/// family with the default parameters (hyperbolic p = 5, cyclical p = 2).
ScheduleFamily schedule_family_from_name(std::string_view name, int cycles = 5);

}  // namespace asvgd
