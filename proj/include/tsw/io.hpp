#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tsw {

std::string read_text(const std::filesystem::path& path);
// Writes through a temporary sibling and renames, so readers never see a
// partial file. Throws IoError with the path on failure.
void write_text(const std::filesystem::path& path, std::string_view content);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

// Square matrix CSV: header "id,<id_0>,...,<id_n-1>", then one row per sample
// starting with its id.
struct LabeledMatrix {
  std::vector<std::string> ids;
  std::vector<double> entries;  // row-major n x n
  std::size_t size() const { return ids.size(); }
};

std::string matrix_to_csv(const LabeledMatrix& m);
LabeledMatrix matrix_from_csv(std::string_view text);

// Pair list: "i j" per line (blank lines and '#' comments skipped).
std::vector<std::pair<std::size_t, std::size_t>> parse_pairs(std::string_view text);
// CSV "i,j,distance".
std::string pairs_to_csv(const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                         const std::vector<double>& values);

// Written next to every output as <out>.manifest.json.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;  // flag -> value, in order
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> artifacts;  // path -> fnv1a64 hex
  std::vector<std::pair<std::string, double>> timings;         // phase -> seconds

  void add_artifact(const std::filesystem::path& path, std::string_view content);
  std::string to_json() const;
};

std::filesystem::path manifest_path(const std::filesystem::path& out);

}  // namespace tsw
