#include <doctest.h>

#include "tsw/datagen.hpp"
#include "tsw/error.hpp"

using namespace tsw;

TEST_CASE("linked twist map") {
  const PointSet o = generate_orbit(2.5, 0.5, 0.5, 3);
  REQUIRE(o.size() == 3);
  CHECK(o[0][0] == 0.5);
  CHECK(o[0][1] == 0.5);
  // a = 0.5 + 2.5 * 0.25 = 1.125 -> 0.125; b = 0.5 + 2.5 * 0.125 * 0.875.
  CHECK(o[1][0] == 0.125);
  CHECK(o[1][1] == 0.7734375);

  const PointSet fixed = generate_orbit(4.3, 0.0, 0.0, 50);
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    CHECK(fixed[i][0] == 0.0);
    CHECK(fixed[i][1] == 0.0);
  }
  CHECK_THROWS_AS(generate_orbit(1.0, 1.5, 0.0, 3), ValidationError);
  CHECK_THROWS_AS(generate_orbit(1.0, 0.5, 0.0, 0), ValidationError);
}

TEST_CASE("orbit dataset") {
  OrbitConfig cfg;
  cfg.points_per_orbit = 30;
  cfg.seed = 9;
  CHECK(cfg.class_params == std::vector<double>{2.5, 3.5, 4.0, 4.1, 4.3});
  const auto data = generate_orbit_dataset(cfg);
  CHECK(data.size() == 250);
  CHECK(data[0].label == 0);
  CHECK(data[249].label == 4);
  CHECK(data[249].param == 4.3);
  for (const auto& c : data) {
    CHECK(c.points.size() == 30);
    for (double x : c.points.coords()) {
      CHECK(x >= 0.0);
      CHECK(x < 1.0 + 1e-300);
    }
  }
  CHECK(dump_dataset(data) == dump_dataset(generate_orbit_dataset(cfg)));
  const auto back = parse_dataset(dump_dataset(data));
  REQUIRE(back.size() == 250);
  CHECK(back[17].points == data[17].points);
  CHECK(back[17].param == data[17].param);

  cfg.orbits_per_class = 0;
  CHECK_THROWS_AS(generate_orbit_dataset(cfg), ValidationError);
}

TEST_CASE("random measures and subsampling") {
  Rng a(4), b(4);
  const DiscreteMeasure m1 = random_measure(3, 7, a), m2 = random_measure(3, 7, b);
  CHECK(m1.supports() == m2.supports());
  CHECK(m1.weights() == m2.weights());
  double s = 0;
  for (double w : m1.weights()) s += w;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(random_measure(2, 1, a).weights()[0] == 1.0);

  const PointSet pts = random_cloud(2, 20, a);
  const PointSet sub = subsample(pts, 5, a);
  CHECK(sub.size() == 5);
  CHECK_THROWS_AS(subsample(pts, 21, a), ValidationError);
  CHECK(subsample(pts, 20, a) == pts);
}
