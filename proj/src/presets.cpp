#include <functional>
#include <map>

#include "experiment.hpp"

namespace asvgd {

namespace {

ScheduleSpec schedule_of(const std::string& family) {
  ScheduleSpec s;
  s.family = family;
  return s;
}

ExperimentConfig fig1(const std::string& family) {
  ExperimentConfig c;
  c.target.name = "univariate5";
  c.schedule = schedule_of(family);
  c.step_size = 0.1;
  c.total_steps = 2000;
  c.particle_count = 100;
  c.init = {{-6.0}, 0.5};
  c.checkpoint_every = 100;
  return c;
}

// Particles start around the bottom-left corner mode.
ExperimentConfig fig2(const std::string& family) {
  ExperimentConfig c;
  c.target.name = "grid16";
  c.schedule = schedule_of(family);
  c.step_size = 0.4;
  c.total_steps = 3000;
  c.particle_count = 200;
  c.init = {{-1.5 * kGridSpacing, -1.5 * kGridSpacing}, 0.5};
  c.checkpoint_every = 100;
  return c;
}

ExperimentConfig irregular_run(const std::string& family) {
  ExperimentConfig c;
  c.target.name = "irregular";
  c.schedule = schedule_of(family);
  c.step_size = 0.3;
  c.total_steps = 5000;
  c.particle_count = 500;
  c.init = {{-5.0, -5.0}, 0.5};
  c.checkpoint_every = 100;
  return c;
}

// Particles start inside one of the four central modes.
ExperimentConfig appendix_a(const std::string& family) {
  ExperimentConfig c;
  c.target.name = "grid16";
  c.schedule = schedule_of(family);
  c.step_size = 0.3;
  c.total_steps = 3000;
  c.particle_count = 100;
  c.init = {{-0.5 * kGridSpacing, -0.5 * kGridSpacing}, 0.25};
  c.checkpoint_every = 100;
  return c;
}

ExperimentConfig highdim_run(std::size_t particles, std::size_t steps, std::size_t every) {
  ExperimentConfig c;
  c.target.name = "highdim";
  c.target.dimension = 100;
  c.schedule = schedule_of("cyclical");
  c.step_size = 0.3;
  c.total_steps = steps;
  c.particle_count = particles;
  c.init = {Point(100, 0.0), 1.0};
  c.checkpoint_every = every;
  c.compare_schedules = {"linear", "hyperbolic", "cyclical"};
  return c;
}

using Factory = std::function<ExperimentConfig()>;

const std::map<std::string, Factory, std::less<>>& registry() {
  static const std::map<std::string, Factory, std::less<>> presets = {
      {"fig1-svgd", [] { return fig1("none"); }},
      {"fig1-asvgd", [] { return fig1("hyperbolic"); }},
      {"fig2-svgd", [] { return fig2("none"); }},
      {"fig2-asvgd", [] { return fig2("cyclical"); }},
      {"fig4-svgd", [] { return irregular_run("none"); }},
      {"fig4-asvgd", [] { return irregular_run("cyclical"); }},
      {"fig5-svgd", [] { return irregular_run("none"); }},
      {"fig5-asvgd", [] { return irregular_run("cyclical"); }},
      {"appendixA-svgd", [] { return appendix_a("none"); }},
      {"appendixA-asvgd", [] { return appendix_a("cyclical"); }},
      {"appendixB",
       [] {
         ExperimentConfig c = fig2("none");
         c.sweep_bandwidths = {FixedBandwidth{0.001}, FixedBandwidth{0.01}, FixedBandwidth{0.1},
                               FixedBandwidth{1.0},   FixedBandwidth{10.0}, FixedBandwidth{100.0},
                               MedianBandwidth{}};
         return c;
       }},
      {"appendixC",
       [] {
         ExperimentConfig c = irregular_run("cyclical");
         c.compare_schedules = {"linear", "hyperbolic", "cyclical"};
         return c;
       }},
      {"appendixD", [] { return highdim_run(5000, 120000, 100); }},
      {"appendixD-desk", [] { return highdim_run(500, 5000, 50); }},
  };
  return presets;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, factory] : registry()) names.push_back(name);
  return names;
}

ExperimentConfig preset(std::string_view name) {
  const auto& presets = registry();
  auto it = presets.find(name);
  if (it == presets.end()) {
    std::string known;
    for (const auto& [n, f] : presets) known += (known.empty() ? "" : ", ") + n;
    throw ValidationError("unknown preset '" + std::string(name) + "' (known: " + known + ")");
  }
  ExperimentConfig c = it->second();
  c.experiment_name = std::string(name);
  return c;
}

}  // namespace asvgd
