#include "tsw/measures.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tsw/error.hpp"

namespace tsw {

using nlohmann::json;

std::vector<double> normalize(std::span<const double> weights) {
  if (weights.empty()) throw ValidationError("normalize: empty weight list");
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!std::isfinite(w) || w < 0.0)
      throw ValidationError("normalize: weight " + std::to_string(i) +
                            " is negative or not finite");
    total += w;
  }
  if (total <= 0.0) throw ValidationError("normalize: all weights are zero");
  std::vector<double> out(weights.begin(), weights.end());
  for (double& w : out) w /= total;
  return out;
}

DiscreteMeasure::DiscreteMeasure(PointSet supports,
                                 std::span<const double> raw_weights)
    : supports_(std::move(supports)) {
  if (supports_.empty())
    throw ValidationError("measure: at least one support point is required");
  if (raw_weights.size() != supports_.size())
    throw ValidationError("measure: " + std::to_string(supports_.size()) +
                          " supports but " + std::to_string(raw_weights.size()) +
                          " weights");
  for (double c : supports_.coords())
    if (!std::isfinite(c))
      throw ValidationError("measure: support coordinates must be finite");
  weights_ = normalize(raw_weights);
}

DiscreteMeasure DiscreteMeasure::uniform(PointSet supports) {
  std::vector<double> ones(supports.size(), 1.0);
  return DiscreteMeasure(std::move(supports), ones);
}

PersistenceDiagram::PersistenceDiagram(std::vector<DiagramPoint> points)
    : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!std::isfinite(p.birth) || !std::isfinite(p.death))
      throw ValidationError("diagram: point " + std::to_string(i) +
                            " has an infinite or NaN coordinate; truncate "
                            "essential classes before loading");
    if (p.death < p.birth)
      throw ValidationError("diagram: point " + std::to_string(i) +
                            " dies before it is born");
  }
}

DiagramPoint project_diagonal(DiagramPoint p) {
  const double mid = 0.5 * (p.birth + p.death);
  return {mid, mid};
}

namespace {

DiscreteMeasure augmented(const PersistenceDiagram& own,
                          const PersistenceDiagram& other) {
  PointSet pts(2);
  for (const auto& p : own.points()) pts.push_back(std::array{p.birth, p.death});
  for (const auto& p : other.points()) {
    const auto q = project_diagonal(p);
    pts.push_back(std::array{q.birth, q.death});
  }
  return DiscreteMeasure::uniform(std::move(pts));
}

}  // namespace

std::pair<DiscreteMeasure, DiscreteMeasure> augment_pair(
    const PersistenceDiagram& a, const PersistenceDiagram& b) {
  if (a.empty() && b.empty())
    throw ValidationError("augment_pair: both diagrams are empty");
  return {augmented(a, b), augmented(b, a)};
}

PersistenceDiagram parse_diagram(std::string_view text) {
  std::vector<DiagramPoint> pts;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string b, d, extra;
    if (!(fields >> b >> d) || (fields >> extra))
      throw ValidationError("diagram line " + std::to_string(lineno) +
                            ": expected two whitespace-separated numbers");
    try {
      // stod accepts "inf"; the diagram constructor rejects it explicitly.
      pts.push_back({std::stod(b), std::stod(d)});
    } catch (const std::logic_error&) {
      throw ValidationError("diagram line " + std::to_string(lineno) +
                            ": not a number");
    }
  }
  return PersistenceDiagram(std::move(pts));
}

PersistenceDiagram load_diagram(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open diagram file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_diagram(buf.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

namespace {

DiscreteMeasure measure_from_json(const json& atoms) {
  if (!atoms.is_array() || atoms.empty())
    throw ValidationError("measure must be a non-empty array of atoms");
  PointSet pts;
  std::vector<double> w;
  for (const auto& atom : atoms) {
    const auto p = atom.at("point").get<std::vector<double>>();
    pts.push_back(p);
    w.push_back(atom.at("weight").get<double>());
  }
  return DiscreteMeasure(std::move(pts), w);
}

DiscreteMeasure cloud_from_json(const json& cloud) {
  PointSet pts;
  for (const auto& p : cloud.at("points")) pts.push_back(p.get<std::vector<double>>());
  return DiscreteMeasure::uniform(std::move(pts));
}

}  // namespace

std::vector<DiscreteMeasure> parse_measures(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("measures: invalid JSON: ") + e.what());
  }
  std::vector<DiscreteMeasure> out;
  try {
    if (!doc.is_array()) throw ValidationError("measures: top level must be an array");
    // A single measure is an array of atoms; wrap it.
    if (!doc.empty() && doc.front().is_object() && doc.front().contains("point")) {
      out.push_back(measure_from_json(doc));
      return out;
    }
    for (const auto& item : doc) {
      if (item.is_object() && item.contains("points"))
        out.push_back(cloud_from_json(item));
      else
        out.push_back(measure_from_json(item));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("measures: ") + e.what());
  }
  return out;
}

std::vector<DiscreteMeasure> load_measures(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open measures file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_measures(buf.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string dump_measures(std::span<const DiscreteMeasure> measures) {
  json doc = json::array();
  for (const auto& m : measures) {
    json atoms = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
      auto p = m.supports()[i];
      atoms.push_back({{"point", std::vector<double>(p.begin(), p.end())},
                       {"weight", m.weights()[i]}});
    }
    doc.push_back(std::move(atoms));
  }
  return doc.dump();
}

}  // namespace tsw
