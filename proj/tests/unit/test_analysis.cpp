#include <doctest.h>

#include <cmath>

#include "tsw/analysis.hpp"
#include "tsw/datagen.hpp"
#include "tsw/error.hpp"
#include "tsw/transport.hpp"

using namespace tsw;

TEST_CASE("bound on two single points") {
  // Cells [0,1) and [1,2) separate the points at depth 1; both grid edges
  // weigh half the root diagonal.
  const W2BoundReport r = check_w2_bound(PointSet{{0}}, PointSet{{1}}, 1, Hypercube{{0}, 2});
  CHECK(r.depth == 1);
  CHECK(r.beta == 2.0);
  CHECK(r.w1 == 1.0);
  CHECK(r.tw == 2.0);
  CHECK(r.slack == 1.0);
  CHECK(r.rhs == 2.0);
  CHECK(r.holds);
  CHECK(r.identity_holds);
  CHECK(r.unmatched_cells == std::vector<long>{0, 1});
}

TEST_CASE("bound on identical clouds") {
  const PointSet a{{0.1, 0.2}, {0.7, 0.4}, {0.7, 0.4}};
  Rng rng(3);
  const W2BoundReport r = check_w2_bound(a, a, 2, rng);
  CHECK(r.w1 == 0.0);
  CHECK(r.w2 == 0.0);
  CHECK(r.tw == 0.0);
  CHECK(r.holds);
  CHECK(r.identity_holds);
  for (long u : r.unmatched_cells) CHECK(u == 0);
}

TEST_CASE("bound holds on random lattice clouds") {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = 1 + uniform_index(rng, 3), n = 1 + uniform_index(rng, 12);
    PointSet a(d), b(d);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> p(d), q(d);
      for (std::size_t k = 0; k < d; ++k) {
        p[k] = double(uniform_index(rng, 9)) / 8;
        q[k] = double(uniform_index(rng, 9)) / 8;
      }
      a.push_back(p);
      b.push_back(q);
    }
    const W2BoundReport r = check_w2_bound(a, b, 1, rng);
    CHECK(r.holds);
    CHECK(r.identity_holds);
    CHECK(r.unmatched_cells == r.unmatched_tree);
    CHECK(r.w1 <= r.w2 + 1e-12);
    CHECK(r.w1 == doctest::Approx(optimal_assignment({a, b, 1.0}).value).epsilon(1e-12));
  }
  CHECK_THROWS_AS(check_w2_bound(PointSet{{0}}, PointSet{{0}, {1}}, 1, rng), ValidationError);
}

TEST_CASE("nearest-neighbour rank") {
  const std::vector<double> w2{0, 1, 2, 1, 0, 3, 2, 3, 0};
  CHECK(mean_nn_rank(w2, w2, 3) == 1.0);
  // q=0 picks 2 (rank 2), q=1 picks 2 (rank 2), q=2 ties and picks 0 (rank 1).
  const std::vector<double> tsw{0, 2, 1, 2, 0, 1, 1, 1, 0};
  CHECK(mean_nn_rank(w2, tsw, 3) == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("W2 matrix and rank experiment") {
  Rng rng(5);
  std::vector<PointSet> clouds;
  for (int i = 0; i < 6; ++i) clouds.push_back(random_cloud(2, 8, rng));
  const auto m1 = w2_matrix(clouds, 1), m3 = w2_matrix(clouds, 3);
  CHECK(m1 == m3);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(m1[i * 6 + i] == 0.0);
    for (std::size_t j = 0; j < 6; ++j) CHECK(m1[i * 6 + j] == m1[j * 6 + i]);
  }
  CHECK(m1[1] == doctest::Approx(optimal_assignment({clouds[0], clouds[1], 2.0}).value));

  NnRankConfig cfg;
  cfg.slice_counts = {1, 3};
  cfg.seed = 2;
  const auto rows = nn_rank_experiment(clouds, m1, cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].n_slices == 3);
  for (const auto& r : rows) {
    CHECK(r.mean_rank >= 1.0);
    CHECK(r.mean_rank <= 5.0);
  }
  const auto again = nn_rank_experiment(clouds, cfg);
  CHECK(again[0].mean_rank == rows[0].mean_rank);
}
