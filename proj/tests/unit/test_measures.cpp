#include <doctest.h>

#include <cmath>

#include "tsw/error.hpp"
#include "tsw/measures.hpp"

using namespace tsw;

TEST_CASE("normalize rescales raw weights onto the simplex") {
  const std::vector<double> raw{1, 1, 2};
  const auto w = normalize(raw);
  CHECK(w[0] == 0.25);
  CHECK(w[1] == 0.25);
  CHECK(w[2] == 0.5);

  const std::vector<double> counts{3, 0, 1};
  const auto c = normalize(counts);
  CHECK(c[0] == 0.75);
  CHECK(c[1] == 0.0);
}

TEST_CASE("normalize rejects bad weights") {
  CHECK_THROWS_AS(normalize(std::vector<double>{}), ValidationError);
  CHECK_THROWS_AS(normalize(std::vector<double>{0, 0}), ValidationError);
  CHECK_THROWS_AS(normalize(std::vector<double>{1, -1}), ValidationError);
  CHECK_THROWS_AS(normalize(std::vector<double>{1, std::nan("")}), ValidationError);
}

TEST_CASE("discrete measure keeps duplicate supports as separate atoms") {
  const DiscreteMeasure m(PointSet{{0, 0}, {0, 0}, {1, 1}}, std::vector<double>{1, 1, 2});
  CHECK(m.size() == 3);
  CHECK(m.dim() == 2);
  CHECK(m.weights()[2] == 0.5);
  CHECK_THROWS_AS(DiscreteMeasure(PointSet{{0, 0}}, std::vector<double>{1, 2}), ValidationError);

  const auto u = DiscreteMeasure::uniform(PointSet{{1}, {2}, {3}, {4}});
  for (double w : u.weights()) CHECK(w == 0.25);
}

TEST_CASE("persistence diagrams") {
  CHECK_THROWS_AS(PersistenceDiagram({{1.0, 0.5}}), ValidationError);
  CHECK_THROWS_AS(PersistenceDiagram({{0.0, std::numeric_limits<double>::infinity()}}),
                  ValidationError);

  const auto p = project_diagonal({1.0, 3.0});
  CHECK(p.birth == 2.0);
  CHECK(p.death == 2.0);

  SUBCASE("augmentation builds equal-size uniform measures") {
    const PersistenceDiagram a({{0, 2}, {1, 3}});
    const PersistenceDiagram b({{0, 1}});
    auto [ma, mb] = augment_pair(a, b);
    CHECK(ma.size() == 3);
    CHECK(mb.size() == 3);
    // A plus the projection of B's point (0,1) -> (0.5, 0.5).
    CHECK(ma.supports()[2][0] == 0.5);
    CHECK(ma.supports()[2][1] == 0.5);
    // B plus projections of (0,2) -> (1,1) and (1,3) -> (2,2).
    CHECK(mb.supports()[1][0] == 1.0);
    CHECK(mb.supports()[2][1] == 2.0);
    for (double w : ma.weights()) CHECK(w == doctest::Approx(1.0 / 3.0));
  }

  SUBCASE("one empty diagram") {
    const PersistenceDiagram a({{0, 2}});
    auto [ma, mb] = augment_pair(a, PersistenceDiagram{});
    CHECK(ma.size() == 1);
    CHECK(mb.size() == 1);
    CHECK(mb.supports()[0][0] == 1.0);
    CHECK_THROWS_AS(augment_pair(PersistenceDiagram{}, PersistenceDiagram{}), ValidationError);
  }

  SUBCASE("text format") {
    const auto d = parse_diagram("# dim 1\n0 1.5\n\n0.25 2\n");
    REQUIRE(d.size() == 2);
    CHECK(d.points()[1].birth == 0.25);
    CHECK_THROWS_AS(parse_diagram("0 x\n"), ValidationError);
  }
}

TEST_CASE("measure JSON round trip is exact") {
  const std::vector<DiscreteMeasure> ms{
      DiscreteMeasure(PointSet{{0.1, 0.2}, {1.0 / 3.0, 2.0}}, std::vector<double>{0.3, 0.7}),
      DiscreteMeasure::uniform(PointSet{{5, 5}})};
  const auto back = parse_measures(dump_measures(ms));
  REQUIRE(back.size() == 2);
  CHECK(back[0].supports() == ms[0].supports());
  CHECK(back[0].weights() == ms[0].weights());
  CHECK(back[1].weights()[0] == 1.0);
}

TEST_CASE("measure loader accepts single measures and labeled clouds") {
  const auto single = parse_measures(R"([{"point":[0,0],"weight":2},{"point":[1,0],"weight":2}])");
  REQUIRE(single.size() == 1);
  CHECK(single[0].weights()[0] == 0.5);

  const auto clouds = parse_measures(R"([{"label":0,"points":[[0,0],[1,1]]},{"label":1,"points":[[2,2]]}])");
  REQUIRE(clouds.size() == 2);
  CHECK(clouds[0].weights()[1] == 0.5);

  CHECK_THROWS_AS(parse_measures("{"), ValidationError);
  CHECK_THROWS_AS(parse_measures(R"([[{"point":[0],"weight":-1}]])"), ValidationError);
  CHECK_THROWS_AS(load_measures("/nonexistent/measures.json"), IoError);
}
