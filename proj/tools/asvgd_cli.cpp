// Command-line front end. Talks to the library only through the C API.

#include <asvgd/asvgd.h>

#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

struct StatusError {
  asvgd_status status;
  std::string message;
};

void check(asvgd_status status) {
  if (status != ASVGD_OK) throw StatusError{status, asvgd_last_error()};
}

int exit_code(asvgd_status status) {
  switch (status) {
    case ASVGD_OK: return 0;
    case ASVGD_ERR_VALIDATION: return kExitValidation;
    case ASVGD_ERR_IO: return kExitIo;
    case ASVGD_ERR_NUMERICAL:
    case ASVGD_ERR_INTERNAL: return kExitNumerical;
  }
  return kExitNumerical;
}

struct ExperimentDeleter {
  void operator()(asvgd_experiment* e) const { asvgd_experiment_destroy(e); }
};
struct ResultDeleter {
  void operator()(asvgd_result* r) const { asvgd_result_destroy(r); }
};
using ExperimentPtr = std::unique_ptr<asvgd_experiment, ExperimentDeleter>;
using ResultPtr = std::unique_ptr<asvgd_result, ResultDeleter>;

struct Options {
  std::string config;
  std::string preset;
  std::optional<std::string> seed;
  std::string out;
  bool overwrite = false;
  std::optional<std::string> steps;
  std::optional<std::string> particles;
  std::optional<std::string> schedule;
  std::optional<std::string> schedule_p;
  std::optional<std::string> cycles;
  std::optional<std::string> epsilon;
  std::optional<std::string> checkpoint_every;
  std::optional<std::string> bandwidth;
  std::vector<std::string> schedules;
  unsigned jobs = 1;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "JSON config file");
  cmd->add_option("--preset", o.preset, "Named preset (see `asvgd presets`)");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_flag("--overwrite", o.overwrite, "Replace existing output files");
  cmd->add_option("--steps", o.steps, "Number of iterations T");
  cmd->add_option("--particles", o.particles, "Number of particles");
  cmd->add_option("--schedule", o.schedule, "none, constant, linear, hyperbolic or cyclical");
  cmd->add_option("--schedule-p", o.schedule_p, "Schedule exponent p");
  cmd->add_option("--cycles", o.cycles, "Number of cycles for the cyclical schedule");
  cmd->add_option("--epsilon", o.epsilon, "Step size");
  cmd->add_option("--checkpoint-every", o.checkpoint_every, "Diagnostics cadence in iterations");
  cmd->add_option("--bandwidth", o.bandwidth, "Kernel bandwidth h, or 'median'");
  cmd->add_flag("-q,--quiet", o.quiet, "Do not print the summary table");
}

ExperimentPtr load(const Options& o) {
  if (o.config.empty() == o.preset.empty()) {
    throw StatusError{ASVGD_ERR_VALIDATION,
                      "exactly one of --config or --preset is required (a config file may "
                      "name a base preset with a \"preset\" key)"};
  }
  asvgd_experiment* raw = nullptr;
  if (!o.config.empty()) {
    check(asvgd_experiment_from_file(o.config.c_str(), &raw));
  } else {
    check(asvgd_experiment_from_preset(o.preset.c_str(), &raw));
  }
  ExperimentPtr e(raw);
  const std::pair<const char*, const std::optional<std::string>*> overrides[] = {
      {"seed", &o.seed},         {"steps", &o.steps},           {"particles", &o.particles},
      {"schedule", &o.schedule}, {"schedule-p", &o.schedule_p}, {"cycles", &o.cycles},
      {"epsilon", &o.epsilon},   {"checkpoint-every", &o.checkpoint_every},
      {"bandwidth", &o.bandwidth},
  };
  for (const auto& [key, value] : overrides) {
    if (*value) check(asvgd_experiment_set(e.get(), key, (*value)->c_str()));
  }
  check(asvgd_experiment_validate(e.get()));
  return e;
}

std::string output_directory(const Options& o, const asvgd_experiment* e) {
  if (!o.out.empty()) return o.out;
  const std::string configured = asvgd_experiment_output_directory(e);
  if (!configured.empty()) return configured;
  return std::string("results/") + asvgd_experiment_name(e);
}

void print_summary(const asvgd_result* r, const std::string& dir) {
  std::printf("%-16s %8s %6s %12s %8s %9s\n", "run", "iter", "gamma", "mmd2", "modes",
              "seconds");
  for (size_t i = 0; i < asvgd_result_count(r); ++i) {
    asvgd_final_stats s;
    check(asvgd_result_final(r, i, &s));
    const std::string modes = std::to_string(s.modes_covered) + "/" + std::to_string(s.mode_count);
    std::printf("%-16s %8zu %6.3f %12.6g %8s %9.2f\n", asvgd_result_label(r, i), s.iteration,
                s.gamma, s.mmd2, modes.c_str(), s.wall_seconds);
  }
  std::printf("wrote %s\n", dir.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stein variational gradient descent with annealing"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(asvgd_version()));

  Options o;
  CLI::App* run = app.add_subcommand("run", "Run one experiment");
  CLI::App* sweep = app.add_subcommand("sweep", "Run one experiment per kernel bandwidth");
  CLI::App* compare = app.add_subcommand("compare", "Run one experiment per annealing schedule");
  CLI::App* presets = app.add_subcommand("presets", "List preset names");
  CLI::App* show = app.add_subcommand("show", "Print the resolved config as JSON");
  for (CLI::App* cmd : {run, sweep, compare, show}) add_common(cmd, o);
  for (CLI::App* cmd : {sweep, compare}) {
    cmd->add_option("--jobs", o.jobs, "Runs to execute in parallel")->check(CLI::PositiveNumber);
  }
  compare->add_option("--schedules", o.schedules, "Schedules to compare (comma separated)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (presets->parsed()) {
      for (size_t i = 0; i < asvgd_preset_count(); ++i) std::puts(asvgd_preset_name(i));
      return 0;
    }
    ExperimentPtr e = load(o);
    if (show->parsed()) {
      char* text = nullptr;
      check(asvgd_experiment_to_json(e.get(), &text));
      std::puts(text);
      asvgd_string_free(text);
      return 0;
    }
    const std::string dir = output_directory(o, e.get());
    asvgd_result* raw = nullptr;
    if (run->parsed()) {
      check(asvgd_experiment_run(e.get(), dir.c_str(), o.overwrite, &raw));
    } else if (sweep->parsed()) {
      check(asvgd_experiment_sweep(e.get(), dir.c_str(), o.overwrite, o.jobs, &raw));
    } else {
      std::vector<const char*> names;
      for (const auto& s : o.schedules) names.push_back(s.c_str());
      check(asvgd_experiment_compare(e.get(), o.schedules.empty() ? nullptr : names.data(),
                                     names.size(), dir.c_str(), o.overwrite, o.jobs, &raw));
    }
    ResultPtr result(raw);
    if (!o.quiet) print_summary(result.get(), dir);
    return 0;
  } catch (const StatusError& e) {
    std::fprintf(stderr, "asvgd: %s: %s\n", asvgd_status_name(e.status), e.message.c_str());
    return exit_code(e.status);
  }
}
