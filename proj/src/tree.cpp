#include "tsw/tree.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "json_io.hpp"
#include "tsw/error.hpp"
#include "tsw/measures.hpp"

namespace tsw {

using nlohmann::json;

TreeDiagnostic validate_tree(std::span<const int> parent,
                             std::span<const double> edge_weight, int root) {
  const std::size_t n = parent.size();
  if (n == 0) return {false, "tree has no nodes", std::nullopt};
  if (edge_weight.size() != n)
    return {false, "edge weight count differs from node count", std::nullopt};
  if (root < 0 || static_cast<std::size_t>(root) >= n)
    return {false, "root index out of range", std::nullopt};
  if (parent[root] != RootedTree::kNoParent)
    return {false, "root has a parent", static_cast<std::size_t>(root)};

  for (std::size_t v = 0; v < n; ++v) {
    if (static_cast<int>(v) == root) continue;
    const int p = parent[v];
    if (p == RootedTree::kNoParent)
      return {false, "node " + std::to_string(v) + " has no parent but is not the root", v};
    if (p < 0 || static_cast<std::size_t>(p) >= n)
      return {false, "parent of node " + std::to_string(v) + " out of range", v};
    if (!std::isfinite(edge_weight[v]))
      return {false, "non-finite weight at edge " + std::to_string(v), v};
    if (edge_weight[v] < 0.0)
      return {false, "negative weight at edge " + std::to_string(v), v};
  }

  // 0 = unseen, 1 = on the current walk, 2 = known to reach the root.
  std::vector<char> state(n, 0);
  state[root] = 2;
  std::vector<std::size_t> walk;
  for (std::size_t start = 0; start < n; ++start) {
    walk.clear();
    std::size_t v = start;
    while (state[v] == 0) {
      state[v] = 1;
      walk.push_back(v);
      v = static_cast<std::size_t>(parent[v]);
    }
    if (state[v] == 1) return {false, "cycle detected at node " + std::to_string(v), v};
    for (std::size_t w : walk) state[w] = 2;
  }
  return {};
}

RootedTree::RootedTree(std::vector<int> parent, std::vector<double> edge_weight,
                       int root, PointSet embeddings)
    : parent_(std::move(parent)),
      edge_weight_(std::move(edge_weight)),
      root_(root),
      embeddings_(std::move(embeddings)) {
  if (auto diag = validate_tree(parent_, edge_weight_, root_); !diag.ok)
    throw ValidationError("invalid tree: " + diag.message);
  if (!embeddings_.empty() && embeddings_.size() != parent_.size())
    throw ValidationError("invalid tree: embedding count differs from node count");
  edge_weight_[root_] = 0.0;

  const std::size_t n = parent_.size();
  depth_.assign(n, -1);
  depth_[root_] = 0;
  std::vector<int> walk;
  for (std::size_t s = 0; s < n; ++s) {
    int v = static_cast<int>(s);
    walk.clear();
    while (depth_[v] < 0) {
      walk.push_back(v);
      v = parent_[v];
    }
    int d = depth_[v];
    for (auto it = walk.rbegin(); it != walk.rend(); ++it) depth_[*it] = ++d;
  }
  max_depth_ = *std::max_element(depth_.begin(), depth_.end());

  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0);
  std::stable_sort(order_.begin(), order_.end(),
                   [&](int a, int b) { return depth_[a] > depth_[b]; });

  std::uint64_t h = 0xcbf29ce484222325ULL ^ static_cast<std::uint64_t>(root_);
  auto mix = [&h](std::uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  for (std::size_t v = 0; v < n; ++v) {
    mix(static_cast<std::uint64_t>(parent_[v] + 1));
    mix(std::bit_cast<std::uint64_t>(edge_weight_[v]));
  }
  fingerprint_ = h;
}

std::vector<std::vector<int>> RootedTree::children() const {
  std::vector<std::vector<int>> out(size());
  for (std::size_t v = 0; v < size(); ++v)
    if (parent_[v] != kNoParent) out[parent_[v]].push_back(static_cast<int>(v));
  return out;
}

RootedTree RootedTree::scaled(double s) const {
  if (!(s >= 0.0) || !std::isfinite(s))
    throw ValidationError("scale factor must be finite and nonnegative");
  std::vector<double> w = edge_weight_;
  for (double& x : w) x *= s;
  return RootedTree(parent_, std::move(w), root_, embeddings_);
}

NodeMeasure::NodeMeasure(const RootedTree& tree, std::vector<double> mass)
    : mass_(std::move(mass)), tree_fingerprint_(tree.fingerprint()) {
  if (mass_.size() != tree.size())
    throw ValidationError("node measure: " + std::to_string(mass_.size()) +
                          " masses for a tree of " + std::to_string(tree.size()) +
                          " nodes");
  double total = 0.0;
  for (double m : mass_) {
    if (!(m >= 0.0) || !std::isfinite(m))
      throw ValidationError("node measure: masses must be finite and nonnegative");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ValidationError("node measure: total mass " + std::to_string(total) +
                          " is not 1");
}

NodeMeasure NodeMeasure::from_atoms(const RootedTree& tree, std::span<const int> nodes,
                                    std::span<const double> weights) {
  if (nodes.size() != weights.size())
    throw ValidationError("node measure: node and weight counts differ");
  const auto w = normalize(weights);
  std::vector<double> mass(tree.size(), 0.0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] < 0 || static_cast<std::size_t>(nodes[i]) >= tree.size())
      throw ValidationError("node measure: node index " + std::to_string(nodes[i]) +
                            " out of range");
    mass[nodes[i]] += w[i];
  }
  return NodeMeasure(tree, std::move(mass));
}

NodeMeasure NodeMeasure::dirac(const RootedTree& tree, int node) {
  if (node < 0 || static_cast<std::size_t>(node) >= tree.size())
    throw ValidationError("node measure: node index out of range");
  std::vector<double> mass(tree.size(), 0.0);
  mass[node] = 1.0;
  return NodeMeasure(tree, std::move(mass));
}

namespace {

void check_node(const RootedTree& tree, int v) {
  if (v < 0 || static_cast<std::size_t>(v) >= tree.size())
    throw ValidationError("node index " + std::to_string(v) + " out of range for a tree of " +
                          std::to_string(tree.size()) + " nodes");
}

}  // namespace

int lowest_common_ancestor(const RootedTree& tree, int x, int z) {
  check_node(tree, x);
  check_node(tree, z);
  while (tree.depth(x) > tree.depth(z)) x = tree.parent(x);
  while (tree.depth(z) > tree.depth(x)) z = tree.parent(z);
  while (x != z) {
    x = tree.parent(x);
    z = tree.parent(z);
  }
  return x;
}

double path_length(const RootedTree& tree, int x, int z) {
  check_node(tree, x);
  check_node(tree, z);
  double len = 0.0;
  while (tree.depth(x) > tree.depth(z)) {
    len += tree.edge_weight(x);
    x = tree.parent(x);
  }
  while (tree.depth(z) > tree.depth(x)) {
    len += tree.edge_weight(z);
    z = tree.parent(z);
  }
  while (x != z) {
    len += tree.edge_weight(x) + tree.edge_weight(z);
    x = tree.parent(x);
    z = tree.parent(z);
  }
  return len;
}

std::vector<double> subtree_masses(const RootedTree& tree, const NodeMeasure& nm) {
  if (nm.tree_fingerprint() != tree.fingerprint())
    throw ValidationError("subtree_masses: measure belongs to a different tree");
  std::vector<double> m = nm.mass();
  for (int v : tree.bottom_up_order())
    if (v != tree.root()) m[tree.parent(v)] += m[v];
  return m;
}

namespace detail {

json tree_to_json_value(const RootedTree& tree) {
  json nodes = json::array();
  for (std::size_t v = 0; v < tree.size(); ++v) {
    json node;
    if (tree.has_embeddings()) {
      auto e = tree.embedding(static_cast<int>(v));
      node["embedding"] = std::vector<double>(e.begin(), e.end());
    } else {
      node["embedding"] = nullptr;
    }
    const int p = tree.parent(static_cast<int>(v));
    node["parent"] = p == RootedTree::kNoParent ? json(nullptr) : json(p);
    node["edge_weight"] = tree.edge_weight(static_cast<int>(v));
    nodes.push_back(std::move(node));
  }
  return {{"nodes", std::move(nodes)}, {"root", tree.root()}};
}

RootedTree tree_from_json_value(const json& doc) {
  try {
    const auto& nodes = doc.at("nodes");
    std::vector<int> parent;
    std::vector<double> weight;
    PointSet emb;
    bool any_embedding = false;
    bool all_embedding = true;
    for (const auto& node : nodes) {
      const auto& p = node.at("parent");
      parent.push_back(p.is_null() ? RootedTree::kNoParent : p.get<int>());
      weight.push_back(node.value("edge_weight", 0.0));
      const auto e = node.find("embedding");
      if (e != node.end() && !e->is_null()) {
        any_embedding = true;
        emb.push_back(e->get<std::vector<double>>());
      } else {
        all_embedding = false;
      }
    }
    if (any_embedding && !all_embedding)
      throw ValidationError("tree JSON: embeddings must be given for all nodes or none");
    return RootedTree(std::move(parent), std::move(weight), doc.at("root").get<int>(),
                      any_embedding ? std::move(emb) : PointSet{});
  } catch (const json::exception& e) {
    throw ValidationError(std::string("tree JSON: ") + e.what());
  }
}

}  // namespace detail

std::string tree_to_json(const RootedTree& tree) {
  return detail::tree_to_json_value(tree).dump();
}

RootedTree tree_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("tree JSON: ") + e.what());
  }
  return detail::tree_from_json_value(doc);
}

}  // namespace tsw
