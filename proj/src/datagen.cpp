#include "tsw/datagen.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <sstream>

#include "tsw/error.hpp"

namespace tsw {

using nlohmann::json;

namespace {

// x mod 1 in [0, 1); floor keeps negative intermediates exact.
double mod1(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

}  // namespace

PointSet generate_orbit(double t, double a0, double b0, std::size_t n) {
  if (!(a0 >= 0.0 && a0 <= 1.0 && b0 >= 0.0 && b0 <= 1.0))
    throw ValidationError("orbit start must lie in [0,1]^2");
  if (n == 0) throw ValidationError("orbit length must be at least 1");
  std::vector<double> coords;
  coords.reserve(2 * n);
  double a = a0, b = b0;
  coords.push_back(a);
  coords.push_back(b);
  for (std::size_t i = 1; i < n; ++i) {
    a = mod1(a + t * b * (1.0 - b));
    b = mod1(b + t * a * (1.0 - a));
    coords.push_back(a);
    coords.push_back(b);
  }
  return PointSet(2, std::move(coords));
}

void OrbitConfig::validate() const {
  if (class_params.empty()) throw ValidationError("orbit config: no class parameters");
  for (double t : class_params)
    if (!(t > 0.0) || !std::isfinite(t))
      throw ValidationError("orbit config: class parameters must be positive");
  if (orbits_per_class < 1) throw ValidationError("orbit config: orbits per class must be >= 1");
  if (points_per_orbit < 1) throw ValidationError("orbit config: points per orbit must be >= 1");
}

std::vector<LabeledCloud> generate_orbit_dataset(const OrbitConfig& cfg) {
  cfg.validate();
  std::vector<LabeledCloud> out;
  out.reserve(cfg.class_params.size() * cfg.orbits_per_class);
  for (std::size_t c = 0; c < cfg.class_params.size(); ++c) {
    for (int k = 0; k < cfg.orbits_per_class; ++k) {
      Rng rng(derive_seed(cfg.seed, c * cfg.orbits_per_class + k));
      const double a0 = uniform01(rng);
      const double b0 = uniform01(rng);
      out.push_back({static_cast<int>(c), cfg.class_params[c],
                     generate_orbit(cfg.class_params[c], a0, b0, cfg.points_per_orbit)});
    }
  }
  return out;
}

std::string dump_dataset(const std::vector<LabeledCloud>& clouds) {
  json doc = json::array();
  for (const auto& c : clouds) {
    json pts = json::array();
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      auto p = c.points[i];
      pts.push_back(std::vector<double>(p.begin(), p.end()));
    }
    doc.push_back({{"label", c.label}, {"param", c.param}, {"points", std::move(pts)}});
  }
  return doc.dump();
}

std::vector<LabeledCloud> parse_dataset(std::string_view json_text) {
  std::vector<LabeledCloud> out;
  try {
    const json doc = json::parse(json_text);
    if (!doc.is_array()) throw ValidationError("dataset: top level must be an array");
    for (const auto& item : doc) {
      LabeledCloud c;
      c.label = item.at("label").get<int>();
      c.param = item.value("param", 0.0);
      for (const auto& p : item.at("points")) c.points.push_back(p.get<std::vector<double>>());
      if (c.points.empty()) throw ValidationError("dataset: empty cloud");
      out.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("dataset: ") + e.what());
  }
  return out;
}

std::vector<LabeledCloud> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_dataset(buf.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

PointSet random_cloud(std::size_t d, std::size_t n, Rng& rng) {
  if (d == 0 || n == 0) throw ValidationError("random_cloud: d and n must be >= 1");
  std::vector<double> coords(d * n);
  for (double& x : coords) x = uniform01(rng);
  return PointSet(d, std::move(coords));
}

DiscreteMeasure random_measure(std::size_t d, std::size_t n, Rng& rng) {
  PointSet pts = random_cloud(d, n, rng);
  std::vector<double> w(n);
  for (double& x : w) x = standard_exponential(rng);
  return DiscreteMeasure(std::move(pts), w);
}

PointSet subsample(const PointSet& points, std::size_t k, Rng& rng) {
  if (k > points.size()) throw ValidationError("subsample: k exceeds the number of points");
  std::vector<std::size_t> idx(points.size());
  std::iota(idx.begin(), idx.end(), 0);
  // Partial Fisher-Yates, then restore original order.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + uniform_index(rng, idx.size() - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return points.subset(idx);
}

}  // namespace tsw
