#include "tsw/io.hpp"

#include <charconv>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "tsw/error.hpp"

namespace tsw {

using nlohmann::ordered_json;

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return buf.str();
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot write " + path.string());
  }
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string matrix_to_csv(const LabeledMatrix& m) {
  const std::size_t n = m.size();
  if (m.entries.size() != n * n) throw ValidationError("matrix_to_csv: size mismatch");
  std::string out = "id";
  for (const auto& id : m.ids) out += "," + id;
  out += '\n';
  for (std::size_t i = 0; i < n; ++i) {
    out += m.ids[i];
    for (std::size_t j = 0; j < n; ++j) {
      out += ',';
      out += format_double(m.entries[i * n + j]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    cells.emplace_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

double parse_double(const std::string& s, std::size_t row) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && *b == ' ') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e)
    throw ValidationError("matrix csv row " + std::to_string(row) + ": bad number '" + s + "'");
  return v;
}

}  // namespace

LabeledMatrix matrix_from_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    auto line = text.substr(start, pos - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = pos + 1;
  }
  if (lines.empty()) throw ValidationError("matrix csv: empty input");
  LabeledMatrix m;
  auto header = split_csv_line(lines[0]);
  m.ids.assign(header.begin() + 1, header.end());
  const std::size_t n = m.ids.size();
  if (lines.size() != n + 1)
    throw ValidationError("matrix csv: expected " + std::to_string(n) + " rows, got " +
                          std::to_string(lines.size() - 1));
  m.entries.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    auto cells = split_csv_line(lines[i + 1]);
    if (cells.size() != n + 1)
      throw ValidationError("matrix csv row " + std::to_string(i + 1) + ": expected " +
                            std::to_string(n + 1) + " cells");
    for (std::size_t j = 1; j <= n; ++j) m.entries.push_back(parse_double(cells[j], i + 1));
  }
  return m;
}

std::vector<std::pair<std::size_t, std::size_t>> parse_pairs(std::string_view text) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    long long i = -1, j = -1;
    std::string rest;
    if (!(ls >> i >> j) || (ls >> rest) || i < 0 || j < 0)
      throw ValidationError("pairs line " + std::to_string(lineno) +
                            ": expected two nonnegative indices");
    out.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  return out;
}

std::string pairs_to_csv(const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                         const std::vector<double>& values) {
  std::string out = "i,j,distance\n";
  for (std::size_t k = 0; k < pairs.size(); ++k)
    out += std::to_string(pairs[k].first) + "," + std::to_string(pairs[k].second) + "," +
           format_double(values[k]) + "\n";
  return out;
}

void RunManifest::add_artifact(const std::filesystem::path& path, std::string_view content) {
  artifacts.emplace_back(path.string(), hex64(fnv1a64(content)));
}

std::string RunManifest::to_json() const {
  ordered_json doc;
  doc["command"] = command;
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  doc["config"] = std::move(cfg);
  doc["seed"] = seed;
  ordered_json arts = ordered_json::array();
  for (const auto& [p, h] : artifacts) arts.push_back({{"path", p}, {"fnv1a64", h}});
  doc["artifacts"] = std::move(arts);
  ordered_json t = ordered_json::object();
  for (const auto& [k, v] : timings) t[k] = v;
  doc["timings_seconds"] = std::move(t);
  return doc.dump(2) + "\n";
}

std::filesystem::path manifest_path(const std::filesystem::path& out) {
  auto p = out;
  p += ".manifest.json";
  return p;
}

}  // namespace tsw
