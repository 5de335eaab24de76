#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tsw/measures.hpp"
#include "tsw/point_set.hpp"
#include "tsw/random.hpp"

namespace tsw {

// Linked twist map:
//   a' = a + t b (1 - b)   mod 1
//   b' = b + t a' (1 - a') mod 1
// The first of the n returned points is (a0, b0).
PointSet generate_orbit(double t, double a0, double b0, std::size_t n);

struct OrbitConfig {
  std::vector<double> class_params{2.5, 3.5, 4.0, 4.1, 4.3};
  int orbits_per_class = 50;
  int points_per_orbit = 200;
  std::uint64_t seed = 0;

  void validate() const;
};

struct LabeledCloud {
  int label = 0;       // index into class_params
  double param = 0.0;  // t of the class
  PointSet points;
};

// Orbit k of class c starts at a uniform point of [0,1]^2 drawn from
// derive_seed(seed, c * orbits_per_class + k).
std::vector<LabeledCloud> generate_orbit_dataset(const OrbitConfig& cfg);

// [{"label": l, "param": t, "points": [[a, b], ...]}, ...]
std::string dump_dataset(const std::vector<LabeledCloud>& clouds);
std::vector<LabeledCloud> parse_dataset(std::string_view json_text);
std::vector<LabeledCloud> load_dataset(const std::filesystem::path& path);

// n supports uniform on [0,1]^d, Dirichlet(1) weights.
DiscreteMeasure random_measure(std::size_t d, std::size_t n, Rng& rng);
// n points uniform on [0,1]^d.
PointSet random_cloud(std::size_t d, std::size_t n, Rng& rng);
// k distinct rows drawn without replacement, kept in original order.
PointSet subsample(const PointSet& points, std::size_t k, Rng& rng);

}  // namespace tsw
