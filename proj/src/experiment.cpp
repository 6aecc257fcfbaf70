#include "experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include "output.hpp"
#include "random.hpp"

namespace asvgd {

namespace fs = std::filesystem;
using nlohmann::json;

SeedSet expand_seed(std::uint64_t master) {
  return {master, derive_seed(master, SeedStream::kInit), derive_seed(master, SeedStream::kTarget),
          derive_seed(master, SeedStream::kReference)};
}

GaussianMixture TargetSpec::build(std::uint64_t derived_target_seed) const {
  if (name.empty()) return GaussianMixture(components);
  NamedTargetParams params;
  params.dimension = dimension;
  params.seed = seed.value_or(derived_target_seed);
  params.spacing = spacing;
  return named_target(name, params);
}

AnnealingSchedule ScheduleSpec::build(std::size_t steps) const {
  ScheduleFamily fam = schedule_family_from_name(family, cycles);
  if (auto* c = std::get_if<ConstantSchedule>(&fam)) {
    c->value = family == "none" ? 1.0 : constant;
  } else if (auto* h = std::get_if<HyperbolicSchedule>(&fam)) {
    h->p = p.value_or(h->p);
  } else if (auto* cyc = std::get_if<CyclicalSchedule>(&fam)) {
    cyc->p = p.value_or(cyc->p);
  }
  return AnnealingSchedule(fam, steps, final_clamp_fraction);
}

// ---- JSON ------------------------------------------------------------------

namespace {

json bandwidth_to_json(const BandwidthPolicy& policy) {
  if (const auto* fixed = std::get_if<FixedBandwidth>(&policy)) return fixed->h;
  return "median";
}

json target_to_json(const TargetSpec& t) {
  json j;
  if (t.name.empty()) {
    j["components"] = json::array();
    for (const auto& c : t.components) {
      j["components"].push_back({{"weight", c.weight}, {"mean", c.mean}, {"sigma", c.sigma}});
    }
    return j;
  }
  j["name"] = t.name;
  if (t.name == "highdim") {
    j["dimension"] = t.dimension;
    if (t.seed) j["seed"] = *t.seed;
  }
  if (t.name == "grid16") j["spacing"] = t.spacing;
  return j;
}

json schedule_to_json(const ScheduleSpec& s) {
  json j{{"family", s.family},
         {"cycles", s.cycles},
         {"constant", s.constant},
         {"final_clamp_fraction", s.final_clamp_fraction}};
  if (s.p) j["p"] = *s.p;
  if (s.total_steps) j["total_steps"] = *s.total_steps;
  return j;
}

// Collects every problem instead of stopping at the first one.
class Reader {
 public:
  std::vector<std::string> errors;

  const json* find(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) {
      errors.push_back(path + ": expected an object");
      return nullptr;
    }
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  template <class T>
  void read(const json& obj, const std::string& key, const std::string& path, T& out,
            bool required = false) {
    const json* v = find(obj, key, path);
    const std::string field = path.empty() ? key : path + "." + key;
    if (!v) {
      if (required) errors.push_back("missing required field '" + field + "'");
      return;
    }
    convert(*v, field, out);
  }

  void convert(const json& v, const std::string& field, double& out) {
    if (!v.is_number()) return type_error(field, "a number");
    out = v.get<double>();
  }
  void convert(const json& v, const std::string& field, bool& out) {
    if (!v.is_boolean()) return type_error(field, "a boolean");
    out = v.get<bool>();
  }
  void convert(const json& v, const std::string& field, std::string& out) {
    if (!v.is_string()) return type_error(field, "a string");
    out = v.get<std::string>();
  }
  void convert(const json& v, const std::string& field, int& out) {
    if (!v.is_number_integer()) return type_error(field, "an integer");
    out = v.get<int>();
  }
  template <class T>
    requires std::is_unsigned_v<T>
  void convert(const json& v, const std::string& field, T& out) {
    if (!v.is_number_unsigned()) return type_error(field, "a non-negative integer");
    out = v.get<T>();
  }
  template <class T>
  void convert(const json& v, const std::string& field, std::optional<T>& out) {
    T tmp{};
    const std::size_t before = errors.size();
    convert(v, field, tmp);
    if (errors.size() == before) out = tmp;
  }
  void convert(const json& v, const std::string& field, Point& out) {
    if (v.is_number()) {
      out = {v.get<double>()};
      return;
    }
    if (!v.is_array()) return type_error(field, "a number or an array of numbers");
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) return type_error(field + "[" + std::to_string(i) + "]", "a number");
      out.push_back(v[i].get<double>());
    }
  }
  void convert(const json& v, const std::string& field, BandwidthPolicy& out) {
    if (v.is_string() && v.get<std::string>() == "median") {
      out = MedianBandwidth{};
    } else if (v.is_number()) {
      out = FixedBandwidth{v.get<double>()};
    } else {
      type_error(field, "\"median\" or a positive number");
    }
  }

 private:
  void type_error(const std::string& field, const std::string& expected) {
    errors.push_back("field '" + field + "' must be " + expected);
  }
};

void read_target(Reader& r, const json& j, TargetSpec& t) {
  if (!j.is_object()) {
    r.errors.push_back("field 'target' must be an object");
    return;
  }
  if (j.contains("components")) {
    t.name.clear();
    t.components.clear();
    const json& comps = j["components"];
    if (!comps.is_array()) {
      r.errors.push_back("field 'target.components' must be an array");
      return;
    }
    for (std::size_t k = 0; k < comps.size(); ++k) {
      const std::string path = "target.components[" + std::to_string(k) + "]";
      MixtureComponent c;
      r.read(comps[k], "weight", path, c.weight);
      r.read(comps[k], "mean", path, c.mean, true);
      r.read(comps[k], "sigma", path, c.sigma, true);
      t.components.push_back(std::move(c));
    }
    return;
  }
  if (j.contains("name")) {
    std::string name;
    r.read(j, "name", "target", name);
    if (name != t.name) {
      // A different named target starts from that target's defaults.
      t = TargetSpec{};
      t.name = name;
    }
    t.components.clear();
  }
  r.read(j, "dimension", "target", t.dimension);
  if (j.contains("seed")) {
    std::optional<std::uint64_t> seed;
    r.read(j, "seed", "target", seed);
    t.seed = seed;
  }
  r.read(j, "spacing", "target", t.spacing);
  if (t.name.empty()) r.errors.push_back("field 'target' needs either 'name' or 'components'");
}

void read_config_fields(Reader& r, const json& doc, ExperimentConfig& c, bool require_all) {
  r.read(doc, "experiment_name", "", c.experiment_name);
  r.read(doc, "output_directory", "", c.output_directory);
  r.read(doc, "seed", "", c.seed);
  if (const json* t = r.find(doc, "target", "")) {
    read_target(r, *t, c.target);
  } else if (require_all) {
    r.errors.push_back("missing required field 'target'");
  }
  if (const json* k = r.find(doc, "kernel", "")) {
    r.read(*k, "bandwidth", "kernel", c.kernel.policy);
    r.read(*k, "bandwidth_floor", "kernel", c.kernel.bandwidth_floor);
  }
  if (const json* s = r.find(doc, "schedule", "")) {
    std::string family = c.schedule.family;
    r.read(*s, "family", "schedule", family);
    if (family != c.schedule.family) {
      c.schedule.family = family;
      c.schedule.p.reset();
    }
    r.read(*s, "p", "schedule", c.schedule.p);
    r.read(*s, "cycles", "schedule", c.schedule.cycles);
    r.read(*s, "constant", "schedule", c.schedule.constant);
    r.read(*s, "final_clamp_fraction", "schedule", c.schedule.final_clamp_fraction);
    r.read(*s, "total_steps", "schedule", c.schedule.total_steps);
  } else if (require_all) {
    r.errors.push_back("missing required field 'schedule'");
  }
  r.read(doc, "step_size", "", c.step_size, require_all);
  r.read(doc, "total_steps", "", c.total_steps, require_all);
  r.read(doc, "particle_count", "", c.particle_count, require_all);
  if (const json* init = r.find(doc, "init", "")) {
    r.read(*init, "mean", "init", c.init.mean, require_all);
    r.read(*init, "scale", "init", c.init.scale, require_all);
  } else if (require_all) {
    r.errors.push_back("missing required field 'init'");
  }
  r.read(doc, "checkpoint_every", "", c.checkpoint_every);
  r.read(doc, "emit_trajectory", "", c.emit_trajectory);
  if (const json* d = r.find(doc, "diagnostics", "")) {
    r.read(*d, "mmd", "diagnostics", c.diagnostics.mmd);
    r.read(*d, "coverage", "diagnostics", c.diagnostics.coverage);
    r.read(*d, "histograms", "diagnostics", c.diagnostics.histograms);
    r.read(*d, "reference_samples", "diagnostics", c.diagnostics.reference_samples);
    r.read(*d, "coverage_radius", "diagnostics", c.diagnostics.coverage_radius);
    r.read(*d, "histogram_bins", "diagnostics", c.diagnostics.histogram_bins);
  }
  if (const json* sw = r.find(doc, "sweep", "")) {
    if (const json* bw = r.find(*sw, "bandwidths", "sweep")) {
      c.sweep_bandwidths.clear();
      if (!bw->is_array()) {
        r.errors.push_back("field 'sweep.bandwidths' must be an array");
      } else {
        for (std::size_t i = 0; i < bw->size(); ++i) {
          BandwidthPolicy p;
          r.convert((*bw)[i], "sweep.bandwidths[" + std::to_string(i) + "]", p);
          c.sweep_bandwidths.push_back(p);
        }
      }
    }
  }
  if (const json* cmp = r.find(doc, "compare", "")) {
    if (const json* names = r.find(*cmp, "schedules", "compare")) {
      c.compare_schedules.clear();
      if (!names->is_array()) {
        r.errors.push_back("field 'compare.schedules' must be an array");
      } else {
        for (std::size_t i = 0; i < names->size(); ++i) {
          std::string name;
          r.convert((*names)[i], "compare.schedules[" + std::to_string(i) + "]", name);
          c.compare_schedules.push_back(name);
        }
      }
    }
  }
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

json to_json(const ExperimentConfig& c) {
  json bandwidths = json::array();
  for (const auto& b : c.sweep_bandwidths) bandwidths.push_back(bandwidth_to_json(b));
  return json{
      {"experiment_name", c.experiment_name},
      {"output_directory", c.output_directory},
      {"seed", c.seed},
      {"target", target_to_json(c.target)},
      {"kernel",
       {{"bandwidth", bandwidth_to_json(c.kernel.policy)},
        {"bandwidth_floor", c.kernel.bandwidth_floor}}},
      {"schedule", schedule_to_json(c.schedule)},
      {"step_size", c.step_size},
      {"total_steps", c.total_steps},
      {"particle_count", c.particle_count},
      {"init", {{"mean", c.init.mean}, {"scale", c.init.scale}}},
      {"checkpoint_every", c.checkpoint_every},
      {"emit_trajectory", c.emit_trajectory},
      {"diagnostics",
       {{"mmd", c.diagnostics.mmd},
        {"coverage", c.diagnostics.coverage},
        {"histograms", c.diagnostics.histograms},
        {"reference_samples", c.diagnostics.reference_samples},
        {"coverage_radius", c.diagnostics.coverage_radius},
        {"histogram_bins", c.diagnostics.histogram_bins}}},
      {"sweep", {{"bandwidths", bandwidths}}},
      {"compare", {{"schedules", c.compare_schedules}}},
  };
}

ExperimentConfig config_from_json(const json& input) {
  const json& doc = input.is_object() && input.contains("config") ? input["config"] : input;
  if (!doc.is_object()) throw ValidationError("config document must be a JSON object");

  ExperimentConfig config;
  bool from_preset = false;
  if (auto it = doc.find("preset"); it != doc.end()) {
    if (!it->is_string()) throw ValidationError("field 'preset' must be a string");
    config = preset(it->get<std::string>());
    from_preset = true;
  }
  Reader reader;
  read_config_fields(reader, doc, config, !from_preset);
  if (!reader.errors.empty()) {
    throw ValidationError("invalid config: " + join(reader.errors, "; "));
  }
  validate(config);
  return config;
}

ExperimentConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    // Map the byte offset to line:column.
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ValidationError("config parse error at line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": " + e.what());
  }
  return config_from_json(doc);
}

ExperimentConfig load_config(const fs::path& path, std::string_view preset_name) {
  if (path.empty()) {
    if (preset_name.empty()) throw ValidationError("either a config file or a preset is required");
    ExperimentConfig config = preset(preset_name);
    validate(config);
    return config;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_config(const ExperimentConfig& config, const fs::path& path) {
  write_file_atomic(path, to_json(config).dump(2) + "\n");
}

// ---- overrides and validation ---------------------------------------------

namespace {

double parse_double(std::string_view key, std::string_view value) {
  try {
    std::size_t used = 0;
    const std::string s(value);
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("--" + std::string(key) + ": '" + std::string(value) +
                          "' is not a number");
  }
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view value) {
  const std::string s(value);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw ValidationError("--" + std::string(key) + ": '" + s + "' is not a non-negative integer");
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ValidationError("--" + std::string(key) + ": '" + s + "' is out of range");
  }
}

}  // namespace

void apply_override(ExperimentConfig& c, std::string_view key, std::string_view value) {
  if (key == "seed") {
    c.seed = parse_unsigned(key, value);
  } else if (key == "steps") {
    c.total_steps = parse_unsigned(key, value);
    c.schedule.total_steps.reset();
    if (c.total_steps > 0) c.checkpoint_every = std::min(c.checkpoint_every, c.total_steps);
  } else if (key == "particles") {
    c.particle_count = parse_unsigned(key, value);
  } else if (key == "schedule") {
    c.schedule.family = std::string(value);
    c.schedule.p.reset();
  } else if (key == "schedule-p") {
    c.schedule.p = parse_double(key, value);
  } else if (key == "cycles") {
    c.schedule.cycles = static_cast<int>(parse_unsigned(key, value));
  } else if (key == "epsilon") {
    c.step_size = parse_double(key, value);
  } else if (key == "checkpoint-every") {
    c.checkpoint_every = parse_unsigned(key, value);
  } else if (key == "out") {
    c.output_directory = std::string(value);
  } else if (key == "bandwidth") {
    if (value == "median") {
      c.kernel.policy = MedianBandwidth{};
    } else {
      c.kernel.policy = FixedBandwidth{parse_double(key, value)};
    }
  } else {
    throw ValidationError("unknown override '" + std::string(key) + "'");
  }
}

std::vector<std::string> validation_errors(const ExperimentConfig& c) {
  std::vector<std::string> errors;
  auto check = [&](bool ok, const std::string& message) {
    if (!ok) errors.push_back(message);
  };

  std::size_t dim = 0;
  try {
    dim = c.target.build(0).dimension();
  } catch (const Error& e) {
    errors.push_back(std::string("target: ") + e.what());
  }
  try {
    c.kernel.validate();
  } catch (const Error& e) {
    errors.push_back(e.what());
  }
  try {
    (void)schedule_family_from_name(c.schedule.family, std::max(c.schedule.cycles, 1));
  } catch (const Error& e) {
    errors.push_back(e.what());
  }
  check(!c.schedule.p || (*c.schedule.p > 0.0 && std::isfinite(*c.schedule.p)),
        "schedule.p must be positive");
  check(c.schedule.cycles >= 1, "schedule.cycles must be >= 1");
  check(c.schedule.constant >= 0.0 && c.schedule.constant <= 1.0,
        "schedule.constant must lie in [0, 1]");
  check(c.schedule.final_clamp_fraction >= 0.0 && c.schedule.final_clamp_fraction < 1.0,
        "schedule.final_clamp_fraction must lie in [0, 1)");
  check(!c.schedule.total_steps || *c.schedule.total_steps == c.total_steps,
        "schedule.total_steps must equal total_steps");
  check(c.step_size > 0.0 && std::isfinite(c.step_size), "step_size must be positive");
  check(c.particle_count >= 1, "particle_count must be >= 1");
  check(c.checkpoint_every >= 1, "checkpoint_every must be >= 1");
  check(c.total_steps == 0 || c.checkpoint_every <= c.total_steps,
        "checkpoint_every must not exceed total_steps");
  check(c.init.scale >= 0.0 && std::isfinite(c.init.scale), "init.scale must be non-negative");
  check(all_finite(c.init.mean), "init.mean must be finite");
  if (dim > 0) {
    check(c.init.mean.size() == dim || c.init.mean.size() == 1,
          "init.mean has dimension " + std::to_string(c.init.mean.size()) + ", target has " +
              std::to_string(dim));
  }
  check(c.diagnostics.reference_samples >= 2, "diagnostics.reference_samples must be >= 2");
  check(c.diagnostics.coverage_radius > 0.0, "diagnostics.coverage_radius must be positive");
  check(c.diagnostics.histogram_bins >= 1, "diagnostics.histogram_bins must be >= 1");
  check(!c.diagnostics.mmd || c.particle_count >= 2, "MMD diagnostics need particle_count >= 2");
  for (const auto& b : c.sweep_bandwidths) {
    if (const auto* f = std::get_if<FixedBandwidth>(&b)) {
      check(f->h > 0.0 && std::isfinite(f->h), "sweep.bandwidths entries must be positive");
    }
  }
  for (const auto& name : c.compare_schedules) {
    try {
      (void)schedule_family_from_name(name);
    } catch (const Error& e) {
      errors.push_back(std::string("compare.schedules: ") + e.what());
    }
  }
  return errors;
}

void validate(const ExperimentConfig& config) {
  const auto errors = validation_errors(config);
  if (!errors.empty()) throw ValidationError("invalid config: " + join(errors, "; "));
}

// ---- execution -------------------------------------------------------------

RunConfig to_run_config(const ExperimentConfig& c, const SeedSet& seeds) {
  RunConfig run;
  run.target = c.target.build(seeds.target);
  run.kernel = c.kernel;
  run.total_steps = c.total_steps;
  if (c.total_steps > 0) run.schedule = c.schedule.build(c.total_steps);
  run.step_size = c.step_size;
  run.particle_count = c.particle_count;
  run.init = c.init;
  if (run.init.mean.size() == 1 && run.target.dimension() > 1) {
    run.init.mean.assign(run.target.dimension(), c.init.mean.front());
  }
  run.seed = seeds.init;
  run.checkpoint_every = c.checkpoint_every;
  return run;
}

ExperimentResult execute(const ExperimentConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.seeds = expand_seed(config.seed);
  const RunConfig run_config = to_run_config(config, result.seeds);
  const GaussianMixture& target = run_config.target;
  result.mode_count = target.size();

  Matrix reference;
  if (config.diagnostics.mmd) {
    reference = target.sample(config.diagnostics.reference_samples, result.seeds.reference);
  }

  const auto& diag = config.diagnostics;
  Observer observer = [&](std::size_t t, double gamma, const ParticleSet& state) {
    DiagnosticsRecord rec;
    rec.iteration = t;
    rec.gamma = gamma;
    rec.mmd2 = diag.mmd ? mmd2_unbiased(state.positions, reference, KernelSpec{})
                        : std::numeric_limits<double>::quiet_NaN();
    const CoverageStats cov = coverage_stats(state.positions, target, diag.coverage_radius);
    rec.modes_covered = cov.modes_covered;
    rec.mode_fractions = cov.mode_fractions;
    result.records.push_back(std::move(rec));
  };

  RunResult run_result = run(run_config, {observer}, {config.emit_trajectory});
  if (config.emit_trajectory) {
    result.particles = std::move(run_result.checkpoints);
  } else {
    const auto& fin = run_result.final_state;
    result.particles.push_back({fin.iteration, result.records.back().gamma, fin.positions});
  }
  if (diag.histograms) {
    result.histograms =
        distance_histogram(run_result.final_state.positions, target, diag.histogram_bins);
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

namespace {

const std::vector<std::string> kRunFiles = {"particles.csv", "diagnostics.csv", "histograms.json",
                                            "manifest.json"};

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json manifest(const ExperimentConfig& config, const SeedSet& seeds, double wall_seconds,
              const std::string& kind) {
  return json{
      {"kind", kind},
      {"config", to_json(config)},
      {"seeds",
       {{"master", seeds.master},
        {"init", seeds.init},
        {"target", seeds.target},
        {"reference", seeds.reference}}},
      {"library_version", ASVGD_VERSION},
      {"wall_time_seconds", wall_seconds},
      {"created_at", utc_timestamp()},
  };
}

void write_run_artifacts(const ExperimentConfig& config, const ExperimentResult& result,
                         const fs::path& dir) {
  write_file_atomic(dir / "particles.csv", particles_csv(result.particles));
  write_file_atomic(dir / "diagnostics.csv",
                    diagnostics_csv_header(result.mode_count) +
                        diagnostics_csv_rows(result.records, result.mode_count,
                                             config.diagnostics.coverage));
  if (config.diagnostics.histograms) {
    write_file_atomic(dir / "histograms.json", histograms_json(result.histograms));
  }
  write_file_atomic(dir / "manifest.json",
                    manifest(config, result.seeds, result.wall_seconds, "run").dump(2) + "\n");
}

// Runs every config, on up to `jobs` threads. Each run is self-contained, so
// results do not depend on the thread count.
std::vector<ExperimentResult> execute_all(const std::vector<ExperimentConfig>& configs,
                                          const std::vector<fs::path>& dirs, unsigned jobs) {
  std::vector<ExperimentResult> results(configs.size());
  std::vector<std::exception_ptr> failures(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        results[i] = execute(configs[i]);
        if (!dirs.empty()) write_run_artifacts(configs[i], results[i], dirs[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, configs.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return results;
}

std::string directory_label(std::string label) {
  std::replace(label.begin(), label.end(), '=', '_');
  return label;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, const OutputOptions& options) {
  validate(config);
  prepare_output(options.directory, kRunFiles, options.overwrite);
  ExperimentResult result = execute(config);
  write_run_artifacts(config, result, options.directory);
  return result;
}

std::string bandwidth_label(const BandwidthPolicy& policy) {
  if (const auto* f = std::get_if<FixedBandwidth>(&policy)) {
    char buf[32];
    const auto end = std::to_chars(buf, buf + sizeof(buf), f->h).ptr;
    return "h=" + std::string(buf, end);
  }
  return "h=median";
}

std::vector<LabeledResult> run_sweep(const ExperimentConfig& config,
                                     const std::optional<OutputOptions>& output, unsigned jobs) {
  validate(config);
  if (config.sweep_bandwidths.empty()) {
    throw ValidationError("sweep needs a non-empty sweep.bandwidths list");
  }
  std::vector<ExperimentConfig> configs;
  std::vector<std::string> labels;
  for (const auto& policy : config.sweep_bandwidths) {
    ExperimentConfig c = config;
    c.kernel.policy = policy;
    c.experiment_name = config.experiment_name + "/" + bandwidth_label(policy);
    configs.push_back(std::move(c));
    labels.push_back(bandwidth_label(policy));
  }

  std::vector<fs::path> dirs;
  if (output) {
    prepare_output(output->directory, {"sweep_summary.csv", "manifest.json"}, output->overwrite);
    for (const auto& label : labels) {
      dirs.push_back(output->directory / directory_label(label));
      prepare_output(dirs.back(), kRunFiles, output->overwrite);
    }
  }
  const auto start = std::chrono::steady_clock::now();
  auto results = execute_all(configs, dirs, jobs);

  std::vector<LabeledResult> out;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    out.push_back({labels[i], configs[i], std::move(results[i])});
  }
  if (output) {
    const std::size_t modes = out.front().result.mode_count;
    std::ostringstream csv;
    csv << "bandwidth," << diagnostics_csv_header(modes);
    for (const auto& entry : out) {
      const std::string value =
          entry.label.substr(2);  // drop "h="
      csv << diagnostics_csv_rows({entry.result.final_record()}, modes,
                                  config.diagnostics.coverage, value);
    }
    write_file_atomic(output->directory / "sweep_summary.csv", csv.str());
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_file_atomic(output->directory / "manifest.json",
                      manifest(config, expand_seed(config.seed), wall, "sweep").dump(2) + "\n");
  }
  return out;
}

std::vector<ScheduleSpec> schedules_from_names(const ExperimentConfig& config,
                                               const std::vector<std::string>& names) {
  std::vector<ScheduleSpec> specs;
  for (const auto& name : names) {
    (void)schedule_family_from_name(name);
    if (name == config.schedule.family) {
      specs.push_back(config.schedule);
      continue;
    }
    ScheduleSpec s;
    s.family = name;
    s.cycles = config.schedule.cycles;
    s.final_clamp_fraction = config.schedule.final_clamp_fraction;
    specs.push_back(s);
  }
  return specs;
}

std::vector<LabeledResult> compare_schedules(const ExperimentConfig& config,
                                             const std::vector<ScheduleSpec>& schedules,
                                             const std::optional<OutputOptions>& output,
                                             unsigned jobs) {
  validate(config);
  std::vector<ScheduleSpec> all;
  const bool has_baseline = std::any_of(schedules.begin(), schedules.end(), [](const auto& s) {
    return s.family == "none";
  });
  if (!has_baseline) {
    ScheduleSpec baseline;
    baseline.family = "none";
    all.push_back(baseline);
  }
  all.insert(all.end(), schedules.begin(), schedules.end());

  std::vector<ExperimentConfig> configs;
  std::vector<std::string> labels;
  std::vector<std::string> errors;
  for (const auto& spec : all) {
    if (spec.total_steps && *spec.total_steps != config.total_steps) {
      errors.push_back("schedule '" + spec.family + "' has total_steps " +
                       std::to_string(*spec.total_steps) + ", expected " +
                       std::to_string(config.total_steps));
    }
    std::string label = spec.family;
    while (std::find(labels.begin(), labels.end(), label) != labels.end()) label += "_";
    ExperimentConfig c = config;
    c.schedule = spec;
    c.experiment_name = config.experiment_name + "/" + label;
    configs.push_back(std::move(c));
    labels.push_back(label);
  }
  if (!errors.empty()) throw ValidationError("compare: " + join(errors, "; "));
  for (const auto& c : configs) validate(c);

  std::vector<fs::path> dirs;
  if (output) {
    prepare_output(output->directory, {"diagnostics.csv", "manifest.json"}, output->overwrite);
    for (const auto& label : labels) {
      dirs.push_back(output->directory / label);
      prepare_output(dirs.back(), kRunFiles, output->overwrite);
    }
  }
  const auto start = std::chrono::steady_clock::now();
  auto results = execute_all(configs, dirs, jobs);

  std::vector<LabeledResult> out;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    out.push_back({labels[i], configs[i], std::move(results[i])});
  }
  if (output) {
    const std::size_t modes = out.front().result.mode_count;
    std::string csv = diagnostics_csv_header(modes, "schedule");
    for (const auto& entry : out) {
      csv += diagnostics_csv_rows(entry.result.records, modes, config.diagnostics.coverage,
                                  entry.label);
    }
    write_file_atomic(output->directory / "diagnostics.csv", csv);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_file_atomic(output->directory / "manifest.json",
                      manifest(config, expand_seed(config.seed), wall, "compare").dump(2) + "\n");
  }
  return out;
}

}  // namespace asvgd
