#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "diagnostics.hpp"
#include "engine.hpp"

namespace asvgd {

// Either a named benchmark target or an explicit list of components.
struct TargetSpec {
  std::string name;  // empty when `components` is used
  std::size_t dimension = 100;         // highdim
  std::optional<std::uint64_t> seed;   // highdim; defaults to the derived target seed
  double spacing = kGridSpacing;       // grid16
  std::vector<MixtureComponent> components;

  GaussianMixture build(std::uint64_t derived_target_seed) const;
  bool operator==(const TargetSpec&) const = default;
};

struct ScheduleSpec {
  std::string family = "none";  // none | constant | linear | hyperbolic | cyclical
  std::optional<double> p;      // family default when unset
  int cycles = 5;
  double constant = 1.0;
  double final_clamp_fraction = kDefaultFinalClampFraction;
  std::optional<std::size_t> total_steps;  // must match the run when set

  AnnealingSchedule build(std::size_t total_steps) const;
  bool operator==(const ScheduleSpec&) const = default;
};

struct DiagnosticsSpec {
  bool mmd = true;
  bool coverage = true;
  bool histograms = true;
  std::size_t reference_samples = 1000;
  double coverage_radius = kDefaultCoverageRadius;
  std::size_t histogram_bins = kDefaultHistogramBins;

  bool operator==(const DiagnosticsSpec&) const = default;
};

struct ExperimentConfig {
  std::string experiment_name = "custom";
  std::string output_directory;
  std::uint64_t seed = 0;
  TargetSpec target;
  KernelSpec kernel;
  ScheduleSpec schedule;
  double step_size = 0.1;
  std::size_t total_steps = 1000;
  std::size_t particle_count = 100;
  InitSpec init;
  std::size_t checkpoint_every = 100;
  bool emit_trajectory = false;
  DiagnosticsSpec diagnostics;
  std::vector<BandwidthPolicy> sweep_bandwidths;  // used by the sweep subcommand
  std::vector<std::string> compare_schedules;     // used by the compare subcommand

  bool operator==(const ExperimentConfig&) const = default;
};

struct SeedSet {
  std::uint64_t master = 0;
  std::uint64_t init = 0;
  std::uint64_t target = 0;
  std::uint64_t reference = 0;
};

SeedSet expand_seed(std::uint64_t master);

// ---- configuration I/O ----------------------------------------------------

nlohmann::json to_json(const ExperimentConfig& config);

/// Parses a config document. A "preset" key selects a base preset whose
/// fields the document then overrides; a run manifest (top-level "config")
/// is accepted as well. Throws ValidationError listing every problem.
ExperimentConfig config_from_json(const nlohmann::json& doc);

ExperimentConfig parse_config(std::string_view text);

/// Loads either a file path or, when `path` is empty, the preset `preset`.
ExperimentConfig load_config(const std::filesystem::path& path, std::string_view preset = {});

void write_config(const ExperimentConfig& config, const std::filesystem::path& path);

/// Applies a CLI-style override ("seed", "steps", "particles", "schedule",
/// "schedule-p", "cycles", "epsilon", "checkpoint-every", "out",
/// "bandwidth"). The result is not validated; call validate().
void apply_override(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Every invariant violation, empty when the config is valid.
std::vector<std::string> validation_errors(const ExperimentConfig& config);
void validate(const ExperimentConfig& config);

// ---- presets ---------------------------------------------------------------

std::vector<std::string> preset_names();
ExperimentConfig preset(std::string_view name);

// ---- execution ---------------------------------------------------------------

RunConfig to_run_config(const ExperimentConfig& config, const SeedSet& seeds);

struct ExperimentResult {
  std::vector<DiagnosticsRecord> records;
  std::vector<Snapshot> particles;  // every checkpoint with emit_trajectory, else final only
  std::vector<DistanceHistogram> histograms;
  std::size_t mode_count = 0;
  SeedSet seeds;
  double wall_seconds = 0.0;

  const DiagnosticsRecord& final_record() const { return records.back(); }
};

/// Runs one experiment in memory.
ExperimentResult execute(const ExperimentConfig& config);

struct OutputOptions {
  std::filesystem::path directory;
  bool overwrite = false;
};

/// execute() plus particles.csv, diagnostics.csv, histograms.json and
/// manifest.json under options.directory.
ExperimentResult run_experiment(const ExperimentConfig& config, const OutputOptions& options);

struct LabeledResult {
  std::string label;
  ExperimentConfig config;
  ExperimentResult result;
};

/// One run per entry of config.sweep_bandwidths, each in its own
/// subdirectory, plus sweep_summary.csv. Runs may execute on `jobs` threads.
std::vector<LabeledResult> run_sweep(const ExperimentConfig& config,
                                     const std::optional<OutputOptions>& output,
                                     unsigned jobs = 1);

/// One run per schedule plus the unannealed baseline, all sharing the seed.
/// Writes a merged diagnostics.csv with a leading schedule column.
std::vector<LabeledResult> compare_schedules(const ExperimentConfig& config,
                                             const std::vector<ScheduleSpec>& schedules,
                                             const std::optional<OutputOptions>& output,
                                             unsigned jobs = 1);

/// Schedule specs for family names, borrowing p/cycles from the config's own
/// schedule when the family matches.
std::vector<ScheduleSpec> schedules_from_names(const ExperimentConfig& config,
                                               const std::vector<std::string>& names);

std::string bandwidth_label(const BandwidthPolicy& policy);

}  // namespace asvgd
