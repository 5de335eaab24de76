#include <doctest.h>

#include "oracles.hpp"
#include "tsw/error.hpp"
#include "tsw/random.hpp"
#include "tsw/tree.hpp"

using namespace tsw;

namespace {

// Random tree on n nodes: node v > 0 attaches to a uniform earlier node.
RootedTree random_tree(std::size_t n, Rng& rng) {
  std::vector<int> parent(n, RootedTree::kNoParent);
  std::vector<double> w(n, 0.0);
  for (std::size_t v = 1; v < n; ++v) {
    parent[v] = static_cast<int>(uniform_index(rng, v));
    w[v] = uniform01(rng) < 0.1 ? 0.0 : uniform(rng, 0.0, 3.0);
  }
  return RootedTree(parent, w, 0);
}

}  // namespace

TEST_CASE("validate_tree reports the first violation") {
  const std::vector<int> ok{-1, 0, 0, 1};
  const std::vector<double> w{0, 1, 2, 3};
  CHECK(validate_tree(ok, w, 0).ok);

  const std::vector<int> cyc{-1, 2, 1};
  auto d = validate_tree(cyc, std::vector<double>{0, 1, 1}, 0);
  CHECK_FALSE(d.ok);
  CHECK(d.message.find("cycle detected at node") != std::string::npos);

  d = validate_tree(ok, std::vector<double>{0, 1, -2, 3}, 0);
  CHECK_FALSE(d.ok);
  CHECK(d.message == "negative weight at edge 2");
  CHECK(d.node == std::size_t{2});

  CHECK_FALSE(validate_tree(std::vector<int>{-1, -1}, std::vector<double>{0, 0}, 0).ok);
  CHECK_THROWS_AS(RootedTree(cyc, std::vector<double>{0, 1, 1}, 0), ValidationError);
}

TEST_CASE("depths and bottom-up order") {
  const RootedTree t({-1, 0, 0, 1, 3}, {0, 1, 1, 1, 1}, 0);
  CHECK(t.max_depth() == 3);
  CHECK(t.depth(4) == 3);
  const auto& order = t.bottom_up_order();
  CHECK(order.front() == 4);
  CHECK(order.back() == 0);
  CHECK(t.children()[0] == std::vector<int>{1, 2});
}

TEST_CASE("path lengths match all-pairs search on random trees") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = 1 + uniform_index(rng, 12);
    const RootedTree t = random_tree(n, rng);
    const auto ref = oracle::tree_distances(t.parents(), t.edge_weights());
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t z = 0; z < n; ++z)
        CHECK(path_length(t, int(x), int(z)) == doctest::Approx(ref[x][z]).epsilon(1e-12));
  }
}

TEST_CASE("tree metric axioms hold on every triple of small trees") {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = 1 + uniform_index(rng, 12);
    const RootedTree t = random_tree(n, rng);
    for (int x = 0; x < int(n); ++x) {
      CHECK(path_length(t, x, x) == 0.0);
      for (int y = 0; y < int(n); ++y) {
        CHECK(path_length(t, x, y) == doctest::Approx(path_length(t, y, x)));
        for (int z = 0; z < int(n); ++z)
          CHECK(path_length(t, x, z) <= path_length(t, x, y) + path_length(t, y, z) + 1e-12);
      }
    }
  }
}

TEST_CASE("subtree masses match brute-force descendant sums") {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = 1 + uniform_index(rng, 20);
    const RootedTree t = random_tree(n, rng);
    std::vector<double> raw(n);
    for (double& x : raw) x = standard_exponential(rng);
    double s = 0;
    for (double x : raw) s += x;
    for (double& x : raw) x /= s;
    const NodeMeasure m(t, raw);
    const auto got = subtree_masses(t, m);
    const auto ref = oracle::descendant_sums(t.parents(), m.mass());
    for (std::size_t v = 0; v < n; ++v) CHECK(got[v] == doctest::Approx(ref[v]).epsilon(1e-12));
    CHECK(got[t.root()] == doctest::Approx(1.0));
  }
}

TEST_CASE("node measures are tied to their tree") {
  const RootedTree t({-1, 0, 0}, {0, 1, 2}, 0);
  const RootedTree u({-1, 0, 0}, {0, 1, 3}, 0);
  CHECK_THROWS_AS(NodeMeasure(t, {0.5, 0.6, 0.0}), ValidationError);
  CHECK_THROWS_AS(NodeMeasure(t, {1.0, 0.0}), ValidationError);
  const auto m = NodeMeasure::from_atoms(t, std::vector<int>{1, 1, 2}, std::vector<double>{1, 1, 2});
  CHECK(m.mass()[1] == 0.5);
  CHECK(m.mass()[2] == 0.5);
  CHECK_THROWS_AS(subtree_masses(u, m), ValidationError);
  CHECK_THROWS_AS(NodeMeasure::dirac(t, 3), ValidationError);
}

TEST_CASE("tree JSON round trip") {
  const RootedTree t({-1, 0, 0, 2}, {0, 0.1, 1.0 / 3.0, 2.5}, 0,
                     PointSet{{0, 0}, {1, 0}, {0, 1}, {0.5, 0.25}});
  const RootedTree back = tree_from_json(tree_to_json(t));
  CHECK(back == t);
  CHECK(back.fingerprint() == t.fingerprint());

  const RootedTree bare({1, -1}, {0.5, 0}, 1);
  CHECK(tree_from_json(tree_to_json(bare)) == bare);
  CHECK_THROWS_AS(tree_from_json(R"({"nodes":[{"parent":null,"edge_weight":0},{"parent":0,"edge_weight":-1}],"root":0})"),
                  ValidationError);
}

TEST_CASE("lowest common ancestor and scaling") {
  const RootedTree t({-1, 0, 0, 1, 1, 2}, {0, 1, 1, 1, 1, 1}, 0);
  CHECK(lowest_common_ancestor(t, 3, 4) == 1);
  CHECK(lowest_common_ancestor(t, 3, 5) == 0);
  CHECK(lowest_common_ancestor(t, 3, 1) == 1);
  const RootedTree s = t.scaled(2.5);
  CHECK(path_length(s, 3, 5) == doctest::Approx(2.5 * path_length(t, 3, 5)));
}
