#include "tsw/tree_build.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "json_io.hpp"
#include "tsw/error.hpp"
#include "tsw/parallel.hpp"

namespace tsw {

using nlohmann::json;

std::string to_string(EdgeMetric m) {
  return m == EdgeMetric::Euclidean ? "euclidean" : "l1";
}

std::string to_string(TreeKind k) {
  return k == TreeKind::Partition ? "quadtree" : "cluster";
}

EdgeMetric parse_edge_metric(std::string_view s) {
  if (s == "euclidean") return EdgeMetric::Euclidean;
  if (s == "l1") return EdgeMetric::L1;
  throw ValidationError("unknown edge metric '" + std::string(s) +
                        "' (choices: euclidean, l1)");
}

TreeKind parse_tree_kind(std::string_view s) {
  if (s == "quadtree" || s == "partition") return TreeKind::Partition;
  if (s == "cluster") return TreeKind::Cluster;
  throw ValidationError("unknown tree kind '" + std::string(s) +
                        "' (choices: quadtree, cluster)");
}

double edge_length(EdgeMetric m, std::span<const double> a, std::span<const double> b) {
  return m == EdgeMetric::Euclidean ? euclidean(a, b) : manhattan(a, b);
}

std::vector<double> Hypercube::center() const {
  std::vector<double> c = min_corner;
  for (double& x : c) x += 0.5 * side;
  return c;
}

bool Hypercube::contains(std::span<const double> p) const {
  if (p.size() != dim()) return false;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p[k] < min_corner[k] || p[k] > min_corner[k] + side) return false;
  return true;
}

void BuildConfig::validate() const {
  if (deepest_level < 1)
    throw ValidationError("deepest level must be at least 1, got " +
                          std::to_string(deepest_level));
  if (kappa < 2)
    throw ValidationError("kappa must be at least 2, got " + std::to_string(kappa));
}

namespace {

void check_points(const PointSet& points, const char* who) {
  if (points.empty()) throw ValidationError(std::string(who) + ": empty point set");
  for (double c : points.coords())
    if (!std::isfinite(c))
      throw ValidationError(std::string(who) + ": coordinates must be finite");
}

}  // namespace

Hypercube bounding_cube(const PointSet& points) {
  check_points(points, "bounding_cube");
  const std::size_t d = points.dim();
  std::vector<double> lo(points[0].begin(), points[0].end());
  std::vector<double> hi = lo;
  for (std::size_t i = 1; i < points.size(); ++i) {
    auto p = points[i];
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  }
  double side = 0.0;
  for (std::size_t k = 0; k < d; ++k) side = std::max(side, hi[k] - lo[k]);
  if (side <= 0.0) side = kDegenerateSide;
  return {std::move(lo), side};
}

Hypercube expand_hypercube(const PointSet& points, double growth,
                           std::span<const double> shift) {
  if (!(growth > 0.0 && growth <= 1.0))
    throw ValidationError("expand_hypercube: growth must lie in (0, 1]");
  Hypercube tight = bounding_cube(points);
  if (shift.size() != tight.dim())
    throw ValidationError("expand_hypercube: one shift fraction per axis is required");
  const double b = tight.side;
  Hypercube out{tight.min_corner, b * (1.0 + growth)};
  const double slack = out.side - b;
  for (std::size_t k = 0; k < out.dim(); ++k) {
    if (!(shift[k] >= 0.0 && shift[k] <= 1.0))
      throw ValidationError("expand_hypercube: shift fractions must lie in [0, 1]");
    out.min_corner[k] -= shift[k] * slack;
  }
  return out;
}

Hypercube expand_hypercube(const PointSet& points, Rng& rng) {
  check_points(points, "expand_hypercube");
  const double growth = 1.0 - uniform01(rng);  // (0, 1]
  std::vector<double> shift(points.dim());
  for (double& s : shift) s = uniform01(rng);
  return expand_hypercube(points, growth, shift);
}

namespace {

// Accumulates nodes in creation order; parents always precede children.
class TreeAssembler {
 public:
  TreeAssembler(std::size_t dim, std::size_t n_points, EdgeMetric metric)
      : emb_(dim), point_to_node_(n_points, -1), metric_(metric) {}

  int add_root(std::span<const double> embedding, double cell_side = 0.0) {
    return add(RootedTree::kNoParent, embedding, 0.0, cell_side);
  }

  int add_child(int parent, std::span<const double> embedding, double cell_side = 0.0) {
    const double w = edge_length(metric_, emb_[parent], embedding);
    return add(parent, embedding, w, cell_side);
  }

  void map_point(std::size_t point, int node) { point_to_node_[point] = node; }

  BuiltTree finish(std::optional<Hypercube> cube, bool keep_sides) {
    RootedTree tree(std::move(parent_), std::move(weight_), 0, std::move(emb_));
    BuiltTree out{std::move(tree), std::move(point_to_node_), std::move(cube), {}};
    if (keep_sides) out.cell_side = std::move(side_);
    return out;
  }

 private:
  int add(int parent, std::span<const double> embedding, double w, double side) {
    parent_.push_back(parent);
    weight_.push_back(w);
    emb_.push_back(embedding);
    side_.push_back(side);
    return static_cast<int>(parent_.size() - 1);
  }

  std::vector<int> parent_;
  std::vector<double> weight_;
  PointSet emb_;
  std::vector<double> side_;
  std::vector<int> point_to_node_;
  EdgeMetric metric_;
};

class PartitionBuilder {
 public:
  PartitionBuilder(const PointSet& pts, const BuildConfig& cfg)
      : pts_(pts), cfg_(cfg), out_(pts.dim(), pts.size(), cfg.edge_metric) {}

  BuiltTree run(const Hypercube& s0) {
    std::vector<std::size_t> all(pts_.size());
    std::iota(all.begin(), all.end(), 0);
    const int root = out_.add_root(s0.center(), s0.side);
    split(all, s0.min_corner, s0.side, root, 0);
    return out_.finish(s0, true);
  }

 private:
  // Distributes `idx` (points inside the cell at `level`) over the occupied
  // half-side child cells, in increasing child-code order.
  void split(std::span<const std::size_t> idx, const std::vector<double>& cell_min,
             double side, int node, int level) {
    const std::size_t d = pts_.dim();
    const double half = 0.5 * side;
    std::vector<std::pair<std::uint32_t, std::size_t>> coded;
    coded.reserve(idx.size());
    for (std::size_t i : idx) {
      auto p = pts_[i];
      std::uint32_t code = 0;
      for (std::size_t k = 0; k < d; ++k)
        if (p[k] >= cell_min[k] + half) code |= (1u << k);
      coded.emplace_back(code, i);
    }
    std::stable_sort(coded.begin(), coded.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<std::size_t> members;
    for (std::size_t begin = 0; begin < coded.size();) {
      std::size_t end = begin;
      members.clear();
      while (end < coded.size() && coded[end].first == coded[begin].first)
        members.push_back(coded[end++].second);
      std::vector<double> child_min = cell_min;
      for (std::size_t k = 0; k < d; ++k)
        if (coded[begin].first & (1u << k)) child_min[k] += half;
      visit(members, child_min, half, node, level + 1);
      begin = end;
    }
  }

  void visit(std::span<const std::size_t> idx, const std::vector<double>& cell_min,
             double side, int parent, int level) {
    if (idx.size() == 1) {
      const int leaf = out_.add_child(parent, pts_[idx[0]], side);
      out_.map_point(idx[0], leaf);
      return;
    }
    std::vector<double> center = cell_min;
    for (double& c : center) c += 0.5 * side;
    const int node = out_.add_child(parent, center, side);
    if (level < cfg_.deepest_level) {
      split(idx, cell_min, side, node, level);
    } else {
      for (std::size_t i : idx) out_.map_point(i, node);
    }
  }

  const PointSet& pts_;
  const BuildConfig& cfg_;
  TreeAssembler out_;
};

}  // namespace

BuiltTree build_partition_tree(const PointSet& points, const Hypercube& root_cube,
                               const BuildConfig& cfg) {
  check_points(points, "build_partition_tree");
  cfg.validate();
  if (points.dim() > kMaxPartitionDim)
    throw ValidationError("partition trees enumerate 2^d cells and support d <= " +
                          std::to_string(kMaxPartitionDim) + " (got d = " +
                          std::to_string(points.dim()) +
                          "); use clustering-based trees instead");
  if (root_cube.dim() != points.dim() || !(root_cube.side > 0.0))
    throw ValidationError("build_partition_tree: root cube must match the data "
                          "dimension and have positive side");
  for (std::size_t i = 0; i < points.size(); ++i)
    if (!root_cube.contains(points[i]))
      throw ValidationError("build_partition_tree: point " + std::to_string(i) +
                            " lies outside the root cube");
  return PartitionBuilder(points, cfg).run(root_cube);
}

BuiltTree build_partition_tree(const PointSet& points, const BuildConfig& cfg, Rng& rng) {
  check_points(points, "build_partition_tree");
  if (points.dim() > kMaxPartitionDim)
    return build_partition_tree(points, Hypercube{}, cfg);  // raises the dimension error
  return build_partition_tree(points, expand_hypercube(points, rng), cfg);
}

namespace {

// Farthest-point clustering of the points listed in `idx`. Centers and
// assignment are positions within `idx`.
Clustering cluster_subset(const PointSet& pts, std::span<const std::size_t> idx,
                          int kappa, std::size_t first_pos) {
  const std::size_t n = idx.size();
  Clustering out;
  std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
  std::vector<char> is_center(n, 0);
  auto add_center = [&](std::size_t pos) {
    out.centers.push_back(pos);
    is_center[pos] = 1;
    auto c = pts[idx[pos]];
    for (std::size_t j = 0; j < n; ++j)
      min_dist[j] = std::min(min_dist[j], euclidean(pts[idx[j]], c));
  };
  add_center(first_pos);
  const std::size_t target = std::min<std::size_t>(static_cast<std::size_t>(kappa), n);
  while (out.centers.size() < target) {
    std::size_t best = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (is_center[j]) continue;
      if (best == n || min_dist[j] > min_dist[best] ||
          (min_dist[j] == min_dist[best] && idx[j] < idx[best]))
        best = j;
    }
    add_center(best);
  }

  out.assignment.assign(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    auto p = pts[idx[j]];
    std::size_t best = 0;
    double best_d = euclidean(p, pts[idx[out.centers[0]]]);
    for (std::size_t c = 1; c < out.centers.size(); ++c) {
      const double dc = euclidean(p, pts[idx[out.centers[c]]]);
      if (dc < best_d || (dc == best_d && idx[out.centers[c]] < idx[out.centers[best]])) {
        best = c;
        best_d = dc;
      }
    }
    out.assignment[j] = best;
    out.radius = std::max(out.radius, best_d);
  }
  return out;
}

}  // namespace

Clustering farthest_point_clustering(const PointSet& points, int kappa,
                                     std::size_t first_center) {
  if (points.empty()) throw ValidationError("farthest_point_clustering: empty input");
  if (kappa < 1) throw ValidationError("farthest_point_clustering: kappa must be >= 1");
  if (first_center >= points.size())
    throw ValidationError("farthest_point_clustering: first center out of range");
  std::vector<std::size_t> all(points.size());
  std::iota(all.begin(), all.end(), 0);
  // Positions coincide with point indices here.
  return cluster_subset(points, all, kappa, first_center);
}

Clustering farthest_point_clustering(const PointSet& points, int kappa, Rng& rng) {
  if (points.empty()) throw ValidationError("farthest_point_clustering: empty input");
  return farthest_point_clustering(points, kappa, uniform_index(rng, points.size()));
}

namespace {

class ClusteringBuilder {
 public:
  ClusteringBuilder(const PointSet& pts, const BuildConfig& cfg, Rng& rng)
      : pts_(pts), cfg_(cfg), rng_(rng), out_(pts.dim(), pts.size(), cfg.edge_metric) {}

  BuiltTree run() {
    const std::size_t d = pts_.dim();
    std::vector<double> mean(d, 0.0);
    for (std::size_t i = 0; i < pts_.size(); ++i)
      for (std::size_t k = 0; k < d; ++k) mean[k] += pts_[i][k];
    for (double& m : mean) m /= static_cast<double>(pts_.size());
    const int root = out_.add_root(mean);
    std::vector<std::size_t> all(pts_.size());
    std::iota(all.begin(), all.end(), 0);
    split(all, root, 0);
    return out_.finish(std::nullopt, false);
  }

 private:
  void split(std::span<const std::size_t> idx, int node, int level) {
    const auto cl = cluster_subset(pts_, idx, cfg_.kappa, uniform_index(rng_, idx.size()));
    std::vector<std::vector<std::size_t>> members(cl.centers.size());
    for (std::size_t j = 0; j < idx.size(); ++j) members[cl.assignment[j]].push_back(idx[j]);
    for (std::size_t c = 0; c < cl.centers.size(); ++c) {
      const auto& m = members[c];
      if (m.empty()) continue;
      if (m.size() == 1) {
        out_.map_point(m[0], out_.add_child(node, pts_[m[0]]));
        continue;
      }
      const int child = out_.add_child(node, pts_[idx[cl.centers[c]]]);
      if (level + 1 < cfg_.deepest_level) {
        split(m, child, level + 1);
      } else {
        for (std::size_t i : m) out_.map_point(i, child);
      }
    }
  }

  const PointSet& pts_;
  const BuildConfig& cfg_;
  Rng& rng_;
  TreeAssembler out_;
};

}  // namespace

BuiltTree build_clustering_tree(const PointSet& points, const BuildConfig& cfg, Rng& rng) {
  check_points(points, "build_clustering_tree");
  cfg.validate();
  return ClusteringBuilder(points, cfg, rng).run();
}

BuiltTree build_chain_tree(std::span<const double> values) {
  if (values.empty()) throw ValidationError("build_chain_tree: no values");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const std::size_t n = values.size();
  std::vector<int> parent(n);
  std::vector<double> weight(n, 0.0);
  PointSet emb(1);
  std::vector<int> p2n(n);
  for (std::size_t k = 0; k < n; ++k) {
    parent[k] = k == 0 ? RootedTree::kNoParent : static_cast<int>(k - 1);
    if (k > 0) weight[k] = values[order[k]] - values[order[k - 1]];
    emb.push_back(std::array{values[order[k]]});
    p2n[order[k]] = static_cast<int>(k);
  }
  return {RootedTree(std::move(parent), std::move(weight), 0, std::move(emb)),
          std::move(p2n), std::nullopt, {}};
}

std::optional<std::size_t> TreeEnsemble::find_point(std::span<const double> p) const {
  if (p.size() != points.dim()) return std::nullopt;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (std::equal(p.begin(), p.end(), points[i].begin())) return i;
  return std::nullopt;
}

TreeEnsemble sample_ensemble(const PointSet& points, int n_slices, const BuildConfig& cfg,
                             TreeKind kind, std::uint64_t master_seed, int threads,
                             const std::optional<Hypercube>& root_cube) {
  if (n_slices < 1) throw ValidationError("sample_ensemble: need at least one slice");
  cfg.validate();
  check_points(points, "sample_ensemble");
  if (kind == TreeKind::Partition && points.dim() > kMaxPartitionDim)
    throw ValidationError("partition trees support d <= " +
                          std::to_string(kMaxPartitionDim) + " (got d = " +
                          std::to_string(points.dim()) + "); use --kind cluster");
  if (root_cube) {
    if (kind != TreeKind::Partition)
      throw ValidationError("a fixed root cube applies to partition trees only");
    if (root_cube->dim() != points.dim())
      throw ValidationError("root cube dimension does not match the points");
    for (std::size_t i = 0; i < points.size(); ++i)
      if (!root_cube->contains(points[i]))
        throw ValidationError("point " + std::to_string(i) + " lies outside the root cube");
  }

  std::vector<std::optional<BuiltTree>> built(static_cast<std::size_t>(n_slices));
  parallel_for(built.size(), threads, [&](std::size_t i) {
    Rng rng(derive_seed(master_seed, static_cast<std::uint64_t>(i)));
    if (root_cube)
      built[i] = build_partition_tree(points, *root_cube, cfg);
    else
      built[i] = kind == TreeKind::Partition ? build_partition_tree(points, cfg, rng)
                                             : build_clustering_tree(points, cfg, rng);
  });

  TreeEnsemble ens;
  ens.kind = kind;
  ens.config = cfg;
  ens.master_seed = master_seed;
  ens.points = points;
  for (auto& b : built) {
    ens.trees.push_back(std::move(b->tree));
    ens.point_to_node.push_back(std::move(b->point_to_node));
  }
  return ens;
}

PointSet unique_supports(std::span<const DiscreteMeasure> measures) {
  PointSet out;
  std::map<std::vector<double>, std::size_t> seen;
  for (const auto& m : measures) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      auto p = m.supports()[i];
      std::vector<double> key(p.begin(), p.end());
      if (seen.emplace(std::move(key), out.size()).second) out.push_back(p);
    }
  }
  return out;
}

std::string ensemble_to_json(const TreeEnsemble& ens) {
  json trees = json::array();
  for (const auto& t : ens.trees) trees.push_back(detail::tree_to_json_value(t));
  json points = json::array();
  for (std::size_t i = 0; i < ens.points.size(); ++i) {
    auto p = ens.points[i];
    points.push_back(std::vector<double>(p.begin(), p.end()));
  }
  json doc = {
      {"config",
       {{"deepest_level", ens.config.deepest_level},
        {"kappa", ens.config.kappa},
        {"edge_metric", to_string(ens.config.edge_metric)},
        {"seed", ens.config.seed}}},
      {"kind", to_string(ens.kind)},
      {"master_seed", ens.master_seed},
      {"points", std::move(points)},
      {"trees", std::move(trees)},
      {"point_to_node", ens.point_to_node},
  };
  return doc.dump();
}

TreeEnsemble ensemble_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    TreeEnsemble ens;
    const auto& cfg = doc.at("config");
    ens.config.deepest_level = cfg.at("deepest_level").get<int>();
    ens.config.kappa = cfg.at("kappa").get<int>();
    ens.config.edge_metric = parse_edge_metric(cfg.at("edge_metric").get<std::string>());
    ens.config.seed = cfg.value("seed", std::uint64_t{0});
    ens.kind = parse_tree_kind(doc.at("kind").get<std::string>());
    ens.master_seed = doc.at("master_seed").get<std::uint64_t>();
    for (const auto& p : doc.at("points")) ens.points.push_back(p.get<std::vector<double>>());
    for (const auto& t : doc.at("trees")) ens.trees.push_back(detail::tree_from_json_value(t));
    ens.point_to_node = doc.at("point_to_node").get<std::vector<std::vector<int>>>();
    if (ens.trees.empty()) throw ValidationError("ensemble JSON: no trees");
    if (ens.point_to_node.size() != ens.trees.size())
      throw ValidationError("ensemble JSON: one point_to_node map per tree is required");
    for (std::size_t s = 0; s < ens.trees.size(); ++s) {
      if (ens.point_to_node[s].size() != ens.points.size())
        throw ValidationError("ensemble JSON: slice " + std::to_string(s) +
                              " does not map every point");
      for (int v : ens.point_to_node[s])
        if (v < 0 || static_cast<std::size_t>(v) >= ens.trees[s].size())
          throw ValidationError("ensemble JSON: slice " + std::to_string(s) +
                                " maps a point to a missing node");
    }
    return ens;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("ensemble JSON: ") + e.what());
  }
}

}  // namespace tsw
