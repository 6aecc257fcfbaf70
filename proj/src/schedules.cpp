#include "schedules.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace asvgd {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

AnnealingSchedule::AnnealingSchedule(ScheduleFamily family, std::size_t total_steps,
                                     double final_clamp_fraction)
    : family_(family), total_steps_(total_steps), final_clamp_fraction_(final_clamp_fraction) {
  validate();
}

AnnealingSchedule AnnealingSchedule::none(std::size_t total_steps) {
  return AnnealingSchedule(ConstantSchedule{1.0}, total_steps);
}

void AnnealingSchedule::validate() const {
  if (total_steps_ == 0) throw ValidationError("schedule.total_steps must be positive");
  if (!(final_clamp_fraction_ >= 0.0 && final_clamp_fraction_ < 1.0)) {
    throw ValidationError("schedule.final_clamp_fraction must lie in [0, 1)");
  }
  std::visit(Overloaded{
                 [](const ConstantSchedule& c) {
                   if (!(c.value >= 0.0 && c.value <= 1.0)) {
                     throw ValidationError("schedule.constant must lie in [0, 1]");
                   }
                 },
                 [](const LinearSchedule&) {},
                 [](const HyperbolicSchedule& h) {
                   if (!(h.p > 0.0) || !std::isfinite(h.p)) {
                     throw ValidationError("schedule.p must be positive");
                   }
                 },
                 [](const CyclicalSchedule& c) {
                   if (c.cycles < 1) throw ValidationError("schedule.cycles must be >= 1");
                   if (!(c.p > 0.0) || !std::isfinite(c.p)) {
                     throw ValidationError("schedule.p must be positive");
                   }
                 },
             },
             family_);
}

std::size_t AnnealingSchedule::clamp_start() const {
  const double raw = (1.0 - final_clamp_fraction_) * static_cast<double>(total_steps_);
  // Guard against 0.95 * 100 landing a hair above 95.
  auto start = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  return std::min(start, total_steps_ - 1);
}

std::size_t AnnealingSchedule::cycle_length() const {
  const auto* c = std::get_if<CyclicalSchedule>(&family_);
  const std::size_t cycles = c ? static_cast<std::size_t>(c->cycles) : 1;
  return (total_steps_ + cycles - 1) / cycles;
}

double AnnealingSchedule::unclamped_gamma(double t) const {
  const double total = static_cast<double>(total_steps_);
  return std::visit(
      Overloaded{
          [](const ConstantSchedule& c) { return c.value; },
          [&](const LinearSchedule&) { return total_steps_ > 1 ? t / (total - 1.0) : 1.0; },
          [&](const HyperbolicSchedule& h) { return std::tanh(std::pow(1.3 * t / total, h.p)); },
          [&](const CyclicalSchedule& c) {
            const double length = static_cast<double>(cycle_length());
            return std::pow(std::fmod(t, length) / length, c.p);
          },
      },
      family_);
}

double AnnealingSchedule::gamma(std::size_t t) const {
  if (t >= total_steps_) {
    throw ValidationError("schedule step " + std::to_string(t) + " outside [0, " +
                          std::to_string(total_steps_) + ")");
  }
  if (t >= clamp_start()) return 1.0;
  return std::clamp(unclamped_gamma(static_cast<double>(t)), 0.0, 1.0);
}

std::string AnnealingSchedule::family_name() const {
  return std::visit(Overloaded{
                        [](const ConstantSchedule& c) -> std::string {
                          return c.value == 1.0 ? "none" : "constant";
                        },
                        [](const LinearSchedule&) -> std::string { return "linear"; },
                        [](const HyperbolicSchedule&) -> std::string { return "hyperbolic"; },
                        [](const CyclicalSchedule&) -> std::string { return "cyclical"; },
                    },
                    family_);
}

ScheduleFamily schedule_family_from_name(std::string_view name, int cycles) {
  if (name == "none") return ConstantSchedule{1.0};
  if (name == "constant") return ConstantSchedule{1.0};
  if (name == "linear") return LinearSchedule{};
  if (name == "hyperbolic") return HyperbolicSchedule{};
  if (name == "cyclical") return CyclicalSchedule{cycles, 2.0};
  throw ValidationError("unknown schedule family '" + std::string(name) +
                        "' (expected none, constant, linear, hyperbolic or cyclical)");
}

}  // namespace asvgd
