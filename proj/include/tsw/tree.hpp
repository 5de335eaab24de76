#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsw/point_set.hpp"

namespace tsw {

// Result of checking raw parent/weight arrays against the tree invariants.
struct TreeDiagnostic {
  bool ok = true;
  std::string message;
  std::optional<std::size_t> node;  // offending node, when there is one
};

// Checks that `parent` describes a single tree rooted at `root` with
// nonnegative finite edge weights. Returns the first violation found.
TreeDiagnostic validate_tree(std::span<const int> parent,
                             std::span<const double> edge_weight, int root);

// Immutable rooted tree. Every non-root node v owns the edge to its parent,
// so edges are indexed by their deeper endpoint and edge_weight(v) is w_e for
// that edge. The root's edge weight is unused and stored as 0.
class RootedTree {
 public:
  static constexpr int kNoParent = -1;

  // Throws ValidationError with the validate_tree message on bad input.
  // `embeddings` is either empty or holds one point per node.
  RootedTree(std::vector<int> parent, std::vector<double> edge_weight, int root,
             PointSet embeddings = {});

  std::size_t size() const { return parent_.size(); }
  int root() const { return root_; }
  int parent(int v) const { return parent_[v]; }
  double edge_weight(int v) const { return edge_weight_[v]; }
  int depth(int v) const { return depth_[v]; }
  int max_depth() const { return max_depth_; }

  const std::vector<int>& parents() const { return parent_; }
  const std::vector<double>& edge_weights() const { return edge_weight_; }
  const std::vector<int>& depths() const { return depth_; }

  bool has_embeddings() const { return !embeddings_.empty(); }
  const PointSet& embeddings() const { return embeddings_; }
  std::span<const double> embedding(int v) const { return embeddings_[v]; }

  // Nodes sorted by decreasing depth (children before parents); ties by index.
  const std::vector<int>& bottom_up_order() const { return order_; }
  std::vector<std::vector<int>> children() const;

  // Structural hash over parents, weights and root. Used to detect measures
  // defined on a different tree.
  std::uint64_t fingerprint() const { return fingerprint_; }

  // Same tree with every edge weight multiplied by `s` >= 0.
  RootedTree scaled(double s) const;

  bool operator==(const RootedTree& o) const {
    return root_ == o.root_ && parent_ == o.parent_ &&
           edge_weight_ == o.edge_weight_ && embeddings_ == o.embeddings_;
  }

 private:
  std::vector<int> parent_;
  std::vector<double> edge_weight_;
  int root_ = 0;
  PointSet embeddings_;
  std::vector<int> depth_;
  std::vector<int> order_;
  int max_depth_ = 0;
  std::uint64_t fingerprint_ = 0;
};

// Probability mass per node of a specific tree.
class NodeMeasure {
 public:
  // `mass` must have one nonnegative entry per node summing to 1 (1e-9).
  NodeMeasure(const RootedTree& tree, std::vector<double> mass);
  // Sums raw atom weights per node, then normalizes.
  static NodeMeasure from_atoms(const RootedTree& tree, std::span<const int> nodes,
                                std::span<const double> weights);
  static NodeMeasure dirac(const RootedTree& tree, int node);

  const std::vector<double>& mass() const { return mass_; }
  std::uint64_t tree_fingerprint() const { return tree_fingerprint_; }

 private:
  std::vector<double> mass_;
  std::uint64_t tree_fingerprint_ = 0;
};

// Length of the unique x-z path, found by walking to the lowest common
// ancestor. O(depth) per query.
double path_length(const RootedTree& tree, int x, int z);

// Lowest common ancestor of x and z.
int lowest_common_ancestor(const RootedTree& tree, int x, int z);

// m[v] = total mass in the subtree rooted at v.
std::vector<double> subtree_masses(const RootedTree& tree, const NodeMeasure& nm);

// JSON {"nodes": [{"embedding": [...]|null, "parent": i|null,
// "edge_weight": w}, ...], "root": r}. Doubles round-trip exactly.
std::string tree_to_json(const RootedTree& tree);
RootedTree tree_from_json(std::string_view text);

}  // namespace tsw
