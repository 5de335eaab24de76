#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tsw/point_set.hpp"
#include "tsw/random.hpp"
#include "tsw/tree_build.hpp"

namespace tsw {

// Comparison of optimal matching costs between two equal-size clouds with
// the partition-tree bound  W <= TW/2 + beta * sqrt(d) / 2^H.
//
// Two trees are built over the union of both clouds inside the same root
// cube. The grid tree has one node per occupied cell at every level 0..H
// (points separated early keep a chain of single-point cells down to H) and
// weight beta * sqrt(d) / 2^(i+1) on every edge between levels i and i+1:
// half the diagonal of the parent cell. The geometric tree is the regular
// partition tree with Euclidean edge lengths between node embeddings.
struct W2BoundReport {
  std::size_t n = 0;       // points per cloud
  int depth = 0;           // H: depth at which all distinct points are separated
  double beta = 0.0;       // side of the root cube
  double w1 = 0.0;         // mean matched Euclidean distance (optimal)
  double w2 = 0.0;         // root-mean-square matched distance (optimal)
  double tw = 0.0;         // TW on the grid tree
  double tw_geometric = 0.0;  // TW on the geometric tree
  double slack = 0.0;      // beta * sqrt(d) / 2^H
  double rhs = 0.0;        // tw / 2 + slack
  bool holds = false;      // w1 <= rhs
  // Diagnostics for stronger variants that are not implied by the matching
  // argument: the RMS cost against the same right side, and the RMS cost
  // against the geometric tree.
  bool holds_rms = false;
  bool holds_rms_geometric = false;
  // Per level i = 0..depth: n - q_i where q_i counts cross-cloud pairs matched
  // inside a common level-i cell (counted on the grid), and the same quantity
  // as half the summed |count difference| over geometric-tree edges into
  // level i, a leaf above level i standing for its own cell.
  std::vector<long> unmatched_cells;
  std::vector<long> unmatched_tree;
  bool identity_holds = false;
};

// Largest depth tried while looking for a separating tree.
inline constexpr int kMaxSeparationDepth = 40;

// Builds a Euclidean partition tree on the union of both clouds inside
// `root_cube`, starting at depth `start_depth` and deepening until every
// pair of distinct points lies in different cells. Coincident points are
// allowed. Throws ValidationError when clouds differ in size or dimension or
// the depth cap is exceeded.
W2BoundReport check_w2_bound(const PointSet& a, const PointSet& b, int start_depth,
                             const Hypercube& root_cube);
// Same with a randomly expanded root cube.
W2BoundReport check_w2_bound(const PointSet& a, const PointSet& b, int start_depth, Rng& rng);

// Row-major matrix of pairwise W2 (optimal assignment, squared Euclidean
// cost) between equal-size clouds.
std::vector<double> w2_matrix(std::span<const PointSet> clouds, int threads = 1);

// For every query q: p = TSW-nearest other cloud (lowest index on ties), and
// rank = 1 + number of clouds strictly closer to q than p under W2. Returns
// the mean rank. Both matrices are n x n row-major.
double mean_nn_rank(std::span<const double> w2, std::span<const double> tsw, std::size_t n);

struct NnRankConfig {
  std::vector<int> slice_counts{1, 2, 4, 8, 12};
  BuildConfig build;
  TreeKind kind = TreeKind::Partition;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct RankRow {
  int n_slices = 0;
  double mean_rank = 0.0;
};

// One ensemble with max(slice_counts) slices is sampled on the union of all
// supports; TSW at n_s slices uses its first n_s trees.
std::vector<RankRow> nn_rank_experiment(std::span<const PointSet> clouds,
                                        const NnRankConfig& cfg);
// Variant with a precomputed W2 matrix.
std::vector<RankRow> nn_rank_experiment(std::span<const PointSet> clouds,
                                        std::span<const double> w2, const NnRankConfig& cfg);

}  // namespace tsw
