#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "diagnostics.hpp"
#include "engine.hpp"

namespace asvgd {

/// Round-trippable decimal: 17 significant digits, '.' separator, and the
/// literal tokens nan / inf / -inf.
std::string format_double(double value);

/// Writes `content` to a sibling temporary and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Creates `dir` if needed and fails with IoError if any of `files` already
/// exists there and overwriting was not requested.
void prepare_output(const std::filesystem::path& dir, const std::vector<std::string>& files,
                    bool overwrite);

std::string particles_csv(const std::vector<Snapshot>& snapshots);

// `prefix_header` / `prefix_value` add a leading column (the schedule name in
// merged comparison tables).
std::string diagnostics_csv_header(std::size_t modes, const std::string& prefix_header = {});
std::string diagnostics_csv_rows(const std::vector<DiagnosticsRecord>& records, std::size_t modes,
                                 bool with_coverage, const std::string& prefix_value = {});

std::string histograms_json(const std::vector<DistanceHistogram>& histograms);

}  // namespace asvgd
