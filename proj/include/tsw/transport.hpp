#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "tsw/measures.hpp"
#include "tsw/point_set.hpp"
#include "tsw/random.hpp"
#include "tsw/tree.hpp"
#include "tsw/tree_build.hpp"

namespace tsw {

// Dense n x m ground costs, all finite and nonnegative.
class CostMatrix {
 public:
  CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static CostMatrix euclidean(const PointSet& a, const PointSet& b);
  // c(x, z) = ||x - z||^p.
  static CostMatrix powered_euclidean(const PointSet& a, const PointSet& b, double p);
  // c(x, z) = d_T(x, z) between the listed tree nodes.
  static CostMatrix tree_metric(const RootedTree& tree, std::span<const int> a,
                                std::span<const int> b);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  const std::vector<double>& entries() const { return entries_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

// Closed-form 1-Wasserstein distance under the tree metric:
// sum over edges e of w_e * |mu(subtree(v_e)) - nu(subtree(v_e))|.
// One bottom-up pass, O(|T|).
double tree_wasserstein(const RootedTree& tree, const NodeMeasure& mu, const NodeMeasure& nu);

// A measure whose supports are indices into an ensemble's point set.
struct IndexedMeasure {
  std::vector<std::size_t> points;
  std::vector<double> weights;  // on the simplex
};

// Maps every support of `m` to the ensemble point with identical
// coordinates. Throws ValidationError naming the first unmapped support.
IndexedMeasure index_measure(const TreeEnsemble& ensemble, const DiscreteMeasure& m);
std::vector<IndexedMeasure> index_measures(const TreeEnsemble& ensemble,
                                           std::span<const DiscreteMeasure> ms);

// Average of tree_wasserstein over the ensemble's slices, each measure pushed
// onto the slice's nodes through point_to_node.
double tree_sliced_wasserstein(const TreeEnsemble& ensemble, const IndexedMeasure& mu,
                               const IndexedMeasure& nu);

// Per-slice sparse vectors (node, w_e * subtree mass), sorted by node. The
// l1 distance between two embeddings of a slice is that slice's TW, which is
// how pairwise TSW matrices are computed.
struct TswEmbedding {
  std::vector<std::vector<std::pair<int, double>>> slices;
};

TswEmbedding embed_measure(const TreeEnsemble& ensemble, const IndexedMeasure& m);
// Mean over the first `n_slices` slices (all when 0) of the per-slice l1
// distance.
double embedding_distance(const TswEmbedding& a, const TswEmbedding& b,
                          std::size_t n_slices = 0);
// Symmetric row-major matrix of pairwise TSW, zero diagonal.
std::vector<double> tsw_matrix(const TreeEnsemble& ensemble,
                               std::span<const IndexedMeasure> measures, int threads = 1);

// W1 between two equal-size uniform samples on the line: mean of
// |a_(i) - b_(i)| over sorted values.
double wasserstein_1d(std::span<const double> a, std::span<const double> b);

// Mean over n_dirs random unit directions (normalized Gaussians) of the 1-D
// W1 between projections. Clouds must have equal cardinality.
double sliced_wasserstein_1d(const PointSet& a, const PointSet& b, int n_dirs, Rng& rng);

// W1 between weighted measures on the line: integral of |F_a - F_b|.
// Weights are normalized.
double wasserstein_1d_weighted(std::span<const double> xa, std::span<const double> wa,
                               std::span<const double> xb, std::span<const double> wb);

// n unit directions in R^d (normalized Gaussians), one row each.
PointSet random_directions(std::size_t d, int n, Rng& rng);
// Mean over the given directions of the weighted 1-D W1 between projections.
double sliced_wasserstein(const DiscreteMeasure& a, const DiscreteMeasure& b,
                          const PointSet& directions);

inline constexpr std::size_t kExactOtMaxEntries = 10'000;

struct TransportPlan {
  double cost = 0.0;
  std::vector<double> plan;  // row-major, rows() x cols()
};

// Exact primal optimal transport min <pi, C> subject to pi 1 = mu,
// pi^T 1 = nu, pi >= 0, solved as a min-cost flow by successive shortest
// paths with reduced-cost potentials. Refuses problems with more than
// `max_entries` cost entries.
TransportPlan solve_transport(const CostMatrix& costs, std::span<const double> mu,
                              std::span<const double> nu,
                              std::size_t max_entries = kExactOtMaxEntries);
double exact_ot(const CostMatrix& costs, std::span<const double> mu,
                std::span<const double> nu, std::size_t max_entries = kExactOtMaxEntries);

inline constexpr std::size_t kAssignmentMaxSize = 500;

// Minimum-cost perfect matching on a square cost matrix (Hungarian method
// with potentials, O(n^3)). Returns the total cost and, for each row, its
// matched column.
std::pair<double, std::vector<std::size_t>> solve_assignment(const CostMatrix& costs);

struct AssignmentProblem {
  PointSet a;
  PointSet b;
  double exponent = 2.0;
};

struct AssignmentResult {
  // (min over permutations of mean ||a_i - b_sigma(i)||^p)^(1/p); for p = 2
  // this is the root-mean-square matched distance.
  double value = 0.0;
  std::vector<std::size_t> permutation;
};

AssignmentResult optimal_assignment(const AssignmentProblem& problem);

}  // namespace tsw
