#include <doctest.h>

#include <algorithm>
#include <bit>
#include <set>

#include "tsw/error.hpp"
#include "tsw/tree_build.hpp"

using namespace tsw;

TEST_CASE("hypercube expansion") {
  const PointSet unit{{0, 0}, {1, 1}, {0.5, 0.2}};
  const Hypercube full = expand_hypercube(unit, 1.0, std::vector<double>{0, 0});
  CHECK(full.side == 2.0);
  CHECK(full.min_corner == std::vector<double>{0, 0});

  const Hypercube shifted = expand_hypercube(unit, 0.5, std::vector<double>{1, 0.5});
  CHECK(shifted.side == 1.5);
  CHECK(shifted.min_corner[0] == -0.5);
  CHECK(shifted.min_corner[1] == -0.25);

  const Hypercube single = expand_hypercube(PointSet{{3, 4}}, 0.25, std::vector<double>{0, 0});
  CHECK(single.side == 1.25);

  CHECK_THROWS_AS(expand_hypercube(unit, 0.0, std::vector<double>{0, 0}), ValidationError);
  CHECK_THROWS_AS(expand_hypercube(PointSet{}, 1.0, std::vector<double>{}), ValidationError);

  Rng a(5), b(5);
  Rng r(9);
  for (int i = 0; i < 100; ++i) {
    const Hypercube c = expand_hypercube(unit, r);
    CHECK(c.side > 1.0);
    CHECK(c.side <= 2.0);
    for (std::size_t k = 0; k < unit.size(); ++k) CHECK(c.contains(unit[k]));
  }
  const Hypercube ca = expand_hypercube(unit, a), cb = expand_hypercube(unit, b);
  CHECK(ca.side == cb.side);
  CHECK(ca.min_corner == cb.min_corner);
}

TEST_CASE("seven-point partition tree") {
  const PointSet pts{{6, 6}, {5, 3}, {6.5, 3.5}, {6.5, 2.5}, {7.5, 2.5}, {2, 2}, {7, 1}};
  BuildConfig cfg;
  cfg.deepest_level = 3;
  const BuiltTree t = build_partition_tree(pts, Hypercube{{0, 0}, 8}, cfg);
  CHECK(t.tree.size() == 10);
  CHECK(t.tree.max_depth() == 3);
  // Root at the center of s0.
  CHECK(t.tree.embedding(t.tree.root())[0] == 4.0);
  CHECK(t.tree.embedding(t.tree.root())[1] == 4.0);
  // x1 and x6 are depth-1 leaves, x2 and x7 depth 2, x3..x5 depth 3.
  const std::vector<int> expected_depth{1, 2, 3, 3, 3, 1, 2};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(t.tree.depth(t.point_to_node[i]) == expected_depth[i]);
    // Leaves sit on their data point.
    CHECK(t.tree.embedding(t.point_to_node[i])[0] == pts[i][0]);
  }
  const std::set<int> distinct(t.point_to_node.begin(), t.point_to_node.end());
  CHECK(distinct.size() == 7);

  cfg.deepest_level = 2;
  const BuiltTree shallow = build_partition_tree(pts, Hypercube{{0, 0}, 8}, cfg);
  CHECK(shallow.tree.size() == 7);
  CHECK(shallow.point_to_node[2] == shallow.point_to_node[4]);
}

TEST_CASE("partition tree edge cases") {
  BuildConfig cfg;
  Rng rng(1);
  const BuiltTree one = build_partition_tree(PointSet{{0.3, 0.3}}, cfg, rng);
  CHECK(one.tree.size() == 2);

  // Coincident points share the deepest center node.
  cfg.deepest_level = 4;
  const BuiltTree same = build_partition_tree(PointSet{{1, 1}, {1, 1}, {1, 1}}, cfg, rng);
  CHECK(same.tree.max_depth() == 4);
  CHECK(same.point_to_node[0] == same.point_to_node[2]);

  // Edge lengths follow the chosen metric between embeddings.
  cfg.edge_metric = EdgeMetric::L1;
  const BuiltTree l1 = build_partition_tree(PointSet{{0, 0}, {1, 1}}, Hypercube{{0, 0}, 2}, cfg);
  for (std::size_t v = 0; v < l1.tree.size(); ++v) {
    const int p = l1.tree.parent(int(v));
    if (p < 0) continue;
    CHECK(l1.tree.edge_weight(int(v)) == manhattan(l1.tree.embedding(int(v)), l1.tree.embedding(p)));
  }

  PointSet wide(21);
  wide.push_back(std::vector<double>(21, 0.0));
  try {
    build_partition_tree(wide, cfg, rng);
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("cluster") != std::string::npos);
  }
}

TEST_CASE("farthest-point clustering on a line") {
  const PointSet line{{0}, {1}, {2}, {3}};
  const Clustering c = farthest_point_clustering(line, 2, 0);
  CHECK(c.centers == std::vector<std::size_t>{0, 3});
  CHECK(c.assignment == std::vector<std::size_t>{0, 0, 1, 1});
  CHECK(c.radius == 1.0);

  const Clustering all = farthest_point_clustering(line, 10, 1);
  CHECK(all.centers.size() == 4);
  CHECK(all.radius == 0.0);

  // Ties on distance go to the lowest index: from 1, points 0 (d=1) and 3
  // (d=2) -> 3; then 0 is at distance 1 from 1.
  const Clustering t = farthest_point_clustering(line, 3, 1);
  CHECK(t.centers == std::vector<std::size_t>{1, 3, 0});
}

TEST_CASE("farthest-point clustering is within twice the optimum radius") {
  // Exhaustive optimum over center subsets on small random sets.
  Rng rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 6);
    PointSet pts(2);
    for (std::size_t i = 0; i < n; ++i) pts.push_back(std::vector<double>{uniform01(rng), uniform01(rng)});
    for (int kappa = 1; kappa <= 3; ++kappa) {
      double opt = 1e300;
      for (unsigned mask = 1; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != std::min<int>(kappa, int(n))) continue;
        double r = 0;
        for (std::size_t p = 0; p < n; ++p) {
          double best = 1e300;
          for (std::size_t c = 0; c < n; ++c)
            if (mask >> c & 1u) best = std::min(best, euclidean(pts[p], pts[c]));
          r = std::max(r, best);
        }
        opt = std::min(opt, r);
      }
      for (std::size_t first = 0; first < n; ++first)
        CHECK(farthest_point_clustering(pts, kappa, first).radius <= 2 * opt + 1e-12);
    }
  }
}

TEST_CASE("clustering tree") {
  Rng rng(3);
  PointSet pts(2);
  for (int i = 0; i < 40; ++i) pts.push_back(std::vector<double>{uniform01(rng), uniform01(rng)});
  BuildConfig cfg;
  cfg.deepest_level = 3;
  cfg.kappa = 3;
  const BuiltTree t = build_clustering_tree(pts, cfg, rng);
  CHECK(t.tree.max_depth() <= 3);
  CHECK(t.point_to_node.size() == 40);
  // Root sits at the mean.
  double mx = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) mx += pts[i][0];
  CHECK(t.tree.embedding(t.tree.root())[0] == doctest::Approx(mx / 40));
  // At most kappa children per node.
  for (const auto& ch : t.tree.children()) CHECK(ch.size() <= 3);
  // Every point's node path ends at the root.
  for (int v : t.point_to_node) {
    int u = v;
    while (t.tree.parent(u) >= 0) u = t.tree.parent(u);
    CHECK(u == t.tree.root());
  }
}

TEST_CASE("chain tree over sorted values") {
  const std::vector<double> v{0.5, -1.0, 2.0, 0.5};
  const BuiltTree t = build_chain_tree(v);
  CHECK(t.tree.max_depth() + 1 == int(t.tree.size()));
  CHECK(t.tree.embedding(t.point_to_node[1])[0] == -1.0);
  CHECK(t.tree.depth(t.point_to_node[1]) == 0);
  const int a = t.point_to_node[1], b = t.point_to_node[2];
  CHECK(path_length(t.tree, a, b) == doctest::Approx(3.0));
}

TEST_CASE("ensembles are deterministic and thread independent") {
  Rng rng(8);
  PointSet pts(2);
  for (int i = 0; i < 60; ++i) pts.push_back(std::vector<double>{uniform01(rng), uniform01(rng)});
  BuildConfig cfg;
  for (TreeKind kind : {TreeKind::Partition, TreeKind::Cluster}) {
    const auto e1 = sample_ensemble(pts, 6, cfg, kind, 42, 1);
    const auto e2 = sample_ensemble(pts, 6, cfg, kind, 42, 4);
    CHECK(ensemble_to_json(e1) == ensemble_to_json(e2));
    const auto e3 = sample_ensemble(pts, 6, cfg, kind, 43, 1);
    CHECK(ensemble_to_json(e1) != ensemble_to_json(e3));

    const auto back = ensemble_from_json(ensemble_to_json(e1));
    CHECK(back.n_slices() == 6);
    CHECK(back.points == pts);
    for (std::size_t s = 0; s < 6; ++s) CHECK(back.trees[s] == e1.trees[s]);
  }
  const auto one = sample_ensemble(pts, 1, cfg, TreeKind::Partition, 0);
  CHECK(one.n_slices() == 1);
  CHECK_THROWS_AS(sample_ensemble(pts, 0, cfg, TreeKind::Partition, 0), ValidationError);
  CHECK_THROWS_AS(parse_tree_kind("octree"), ValidationError);
  CHECK(parse_tree_kind("quadtree") == TreeKind::Partition);
}

TEST_CASE("unique supports keep first-seen order") {
  const std::vector<DiscreteMeasure> ms{DiscreteMeasure::uniform(PointSet{{1}, {2}}),
                                        DiscreteMeasure::uniform(PointSet{{2}, {0}})};
  const PointSet u = unique_supports(ms);
  CHECK(u == PointSet{{1}, {2}, {0}});
}
