#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "error.hpp"

namespace asvgd {

namespace fs = std::filesystem;

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

void prepare_output(const fs::path& dir, const std::vector<std::string>& files, bool overwrite) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  if (overwrite) return;
  for (const auto& name : files) {
    if (fs::exists(dir / name)) {
      throw IoError((dir / name).string() + " already exists (pass --overwrite to replace it)");
    }
  }
}

std::string particles_csv(const std::vector<Snapshot>& snapshots) {
  std::ostringstream out;
  const Eigen::Index d = snapshots.empty() ? 0 : snapshots.front().positions.cols();
  out << "iter,particle_id";
  for (Eigen::Index j = 0; j < d; ++j) out << ",x_" << j;
  out << '\n';
  for (const auto& snap : snapshots) {
    for (Eigen::Index i = 0; i < snap.positions.rows(); ++i) {
      out << snap.iteration << ',' << i;
      for (Eigen::Index j = 0; j < d; ++j) out << ',' << format_double(snap.positions(i, j));
      out << '\n';
    }
  }
  return out.str();
}

std::string diagnostics_csv_header(std::size_t modes, const std::string& prefix_header) {
  std::ostringstream out;
  if (!prefix_header.empty()) out << prefix_header << ',';
  out << "iter,gamma,mmd2,modes_covered";
  for (std::size_t k = 0; k < modes; ++k) out << ",frac_mode_" << k;
  out << '\n';
  return out.str();
}

std::string diagnostics_csv_rows(const std::vector<DiagnosticsRecord>& records, std::size_t modes,
                                 bool with_coverage, const std::string& prefix_value) {
  std::ostringstream out;
  for (const auto& r : records) {
    if (!prefix_value.empty()) out << prefix_value << ',';
    out << r.iteration << ',' << format_double(r.gamma) << ',' << format_double(r.mmd2) << ',';
    if (with_coverage) {
      out << r.modes_covered;
    } else {
      out << "nan";
    }
    for (std::size_t k = 0; k < modes; ++k) {
      out << ',' << (with_coverage ? format_double(r.mode_fractions[k]) : std::string("nan"));
    }
    out << '\n';
  }
  return out.str();
}

std::string histograms_json(const std::vector<DistanceHistogram>& histograms) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& h : histograms) {
    doc.push_back({{"mode_index", h.mode_index}, {"bin_edges", h.bin_edges}, {"counts", h.counts}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace asvgd
