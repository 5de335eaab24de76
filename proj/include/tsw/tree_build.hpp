#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsw/measures.hpp"
#include "tsw/point_set.hpp"
#include "tsw/random.hpp"
#include "tsw/tree.hpp"

namespace tsw {

enum class EdgeMetric { Euclidean, L1 };
enum class TreeKind { Partition, Cluster };

std::string to_string(EdgeMetric m);
std::string to_string(TreeKind k);
EdgeMetric parse_edge_metric(std::string_view s);  // "euclidean" | "l1"
TreeKind parse_tree_kind(std::string_view s);      // "quadtree" | "partition" | "cluster"

double edge_length(EdgeMetric m, std::span<const double> a, std::span<const double> b);

// Axis-aligned hypercube [min_corner, min_corner + side)^d.
struct Hypercube {
  std::vector<double> min_corner;
  double side = 0.0;

  std::size_t dim() const { return min_corner.size(); }
  std::vector<double> center() const;
  bool contains(std::span<const double> p) const;  // closed box
};

// Largest dimension handled by the 2^d partition builder.
inline constexpr std::size_t kMaxPartitionDim = 20;
// Side used when all points coincide and the bounding box is degenerate.
inline constexpr double kDegenerateSide = 1.0;

struct BuildConfig {
  int deepest_level = 6;  // H_T
  int kappa = 4;          // clusters per split, clustering trees only
  EdgeMetric edge_metric = EdgeMetric::Euclidean;
  std::uint64_t seed = 0;

  void validate() const;  // throws ValidationError
};

// Tight bounding cube: per-axis minimum as corner, side = largest extent
// (kDegenerateSide when every point coincides).
Hypercube bounding_cube(const PointSet& points);

// Random expansion of the bounding cube of side b into s0 of side
// b * (1 + growth), growth in (0, 1], shifted down by shift[k] * (side - b)
// on axis k with shift[k] in [0, 1]. Every point stays inside s0.
Hypercube expand_hypercube(const PointSet& points, double growth,
                           std::span<const double> shift);
// Draws growth ~ U(0, 1] and shift ~ U[0, 1)^d from `rng`.
Hypercube expand_hypercube(const PointSet& points, Rng& rng);

// A tree built over a point set together with the node each point maps to.
struct BuiltTree {
  RootedTree tree;
  std::vector<int> point_to_node;
  // Partition trees only: the root cube and the side of the cell each node
  // stands for.
  std::optional<Hypercube> root_cube;
  std::vector<double> cell_side;
};

// Quadtree-style partition tree inside a given root cube. The root is the
// cube center; an occupied cell with one point becomes a leaf at that point,
// a cell with several points becomes a node at the cell center and is split
// into 2^d half-side cells until depth deepest_level, where all remaining
// points map to the center node. Empty cells are dropped.
BuiltTree build_partition_tree(const PointSet& points, const Hypercube& root_cube,
                               const BuildConfig& cfg);
// Same, inside a randomly expanded root cube.
BuiltTree build_partition_tree(const PointSet& points, const BuildConfig& cfg, Rng& rng);

struct Clustering {
  std::vector<std::size_t> centers;     // point indices, in selection order
  std::vector<std::size_t> assignment;  // cluster index (into centers) per point
  double radius = 0.0;                  // max distance from a point to its center
};

// Greedy k-center: start at `first_center`, repeatedly add the point farthest
// from the chosen centers, then assign each point to its nearest center.
// Ties go to the lowest point index. O(n * kappa).
Clustering farthest_point_clustering(const PointSet& points, int kappa,
                                     std::size_t first_center);
// First center drawn uniformly from `rng`.
Clustering farthest_point_clustering(const PointSet& points, int kappa, Rng& rng);

// Clustering tree: root at the mean of all points, each node's points split
// by farthest-point clustering into kappa clusters; singleton clusters become
// leaves, larger ones become nodes at their center and are split again until
// depth deepest_level.
BuiltTree build_clustering_tree(const PointSet& points, const BuildConfig& cfg, Rng& rng);

// Path tree over sorted values: node k embeds the k-th smallest value, root is
// the smallest, edge weights are consecutive gaps. point_to_node maps each
// input value to its node.
BuiltTree build_chain_tree(std::span<const double> values);

// n_s independently sampled trees over one point set.
struct TreeEnsemble {
  TreeKind kind = TreeKind::Partition;
  BuildConfig config;
  std::uint64_t master_seed = 0;
  PointSet points;
  std::vector<RootedTree> trees;
  std::vector<std::vector<int>> point_to_node;  // [slice][point]

  std::size_t n_slices() const { return trees.size(); }
  // Index of a point with exactly these coordinates, if any.
  std::optional<std::size_t> find_point(std::span<const double> p) const;
};

// Slice i is built from its own generator seeded derive_seed(master_seed, i);
// the result does not depend on `threads`. A given `root_cube` replaces the
// random expansion (partition trees only), making every slice identical.
TreeEnsemble sample_ensemble(const PointSet& points, int n_slices, const BuildConfig& cfg,
                             TreeKind kind, std::uint64_t master_seed, int threads = 1,
                             const std::optional<Hypercube>& root_cube = std::nullopt);

// Union of all supports with exact duplicates removed, in first-seen order.
PointSet unique_supports(std::span<const DiscreteMeasure> measures);

// {"config": {...}, "kind": ..., "master_seed": s, "points": [[...]],
//  "trees": [tree JSON...], "point_to_node": [[...], ...]}
std::string ensemble_to_json(const TreeEnsemble& ensemble);
TreeEnsemble ensemble_from_json(std::string_view text);

}  // namespace tsw
