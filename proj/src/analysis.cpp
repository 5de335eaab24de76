#include "tsw/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "tsw/error.hpp"
#include "tsw/parallel.hpp"
#include "tsw/transport.hpp"

namespace tsw {

namespace {

// Child codes of the cells containing p at levels 1..depth, found by
// repeated bisection of the root cube.
std::vector<std::uint32_t> cell_path(std::span<const double> p, const Hypercube& cube,
                                     int depth) {
  std::vector<double> lo = cube.min_corner;
  double side = cube.side;
  std::vector<std::uint32_t> path;
  path.reserve(depth);
  for (int level = 1; level <= depth; ++level) {
    const double half = 0.5 * side;
    std::uint32_t code = 0;
    for (std::size_t k = 0; k < p.size(); ++k)
      if (p[k] >= lo[k] + half) {
        code |= 1u << k;
        lo[k] += half;
      }
    path.push_back(code);
    side = half;
  }
  return path;
}

bool distinct_points_separated(const PointSet& pts, const std::vector<int>& p2n) {
  std::map<int, std::size_t> owner;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto [it, fresh] = owner.emplace(p2n[i], i);
    if (!fresh) {
      auto other = pts[it->second];
      auto mine = pts[i];
      if (!std::equal(mine.begin(), mine.end(), other.begin())) return false;
    }
  }
  return true;
}

}  // namespace

W2BoundReport check_w2_bound(const PointSet& a, const PointSet& b, int start_depth,
                             const Hypercube& root_cube) {
  if (a.size() != b.size() || a.empty())
    throw ValidationError("check_w2_bound: clouds must be non-empty and of equal size");
  if (a.dim() != b.dim()) throw ValidationError("check_w2_bound: dimension mismatch");
  const std::size_t n = a.size();
  const PointSet all = PointSet::concat(a, b);

  BuildConfig cfg;
  cfg.edge_metric = EdgeMetric::Euclidean;
  std::optional<BuiltTree> built;
  for (int h = std::max(1, start_depth); h <= kMaxSeparationDepth; ++h) {
    cfg.deepest_level = h;
    auto t = build_partition_tree(all, root_cube, cfg);
    if (distinct_points_separated(all, t.point_to_node)) {
      built = std::move(t);
      break;
    }
  }
  if (!built)
    throw ValidationError("check_w2_bound: points are not separated by depth " +
                          std::to_string(kMaxSeparationDepth));
  const RootedTree& tree = built->tree;

  W2BoundReport r;
  r.n = n;
  r.depth = tree.max_depth();
  r.beta = root_cube.side;
  const double root_diag = r.beta * std::sqrt(static_cast<double>(a.dim()));
  r.slack = root_diag / std::ldexp(1.0, r.depth);

  std::vector<int> nodes_a(built->point_to_node.begin(), built->point_to_node.begin() + n);
  std::vector<int> nodes_b(built->point_to_node.begin() + n, built->point_to_node.end());
  const std::vector<double> uniform(n, 1.0);
  r.tw_geometric = tree_wasserstein(tree, NodeMeasure::from_atoms(tree, nodes_a, uniform),
                                    NodeMeasure::from_atoms(tree, nodes_b, uniform));
  r.w1 = optimal_assignment({a, b, 1.0}).value;
  r.w2 = optimal_assignment({a, b, 2.0}).value;

  std::vector<std::vector<std::uint32_t>> paths(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i) paths[i] = cell_path(all[i], root_cube, r.depth);

  {
    // Grid tree: nodes are the distinct path prefixes of length 0..depth.
    std::map<std::vector<std::uint32_t>, int> id;
    std::vector<int> parent;
    std::vector<double> weight;
    std::vector<int> leaf_of(2 * n);
    id[{}] = 0;
    parent.push_back(RootedTree::kNoParent);
    weight.push_back(0.0);
    for (std::size_t i = 0; i < 2 * n; ++i) {
      std::vector<std::uint32_t> prefix;
      int node = 0;
      for (int level = 1; level <= r.depth; ++level) {
        prefix.push_back(paths[i][level - 1]);
        auto [it, fresh] = id.emplace(prefix, static_cast<int>(parent.size()));
        if (fresh) {
          parent.push_back(node);
          weight.push_back(0.5 * root_diag / std::ldexp(1.0, level - 1));
        }
        node = it->second;
      }
      leaf_of[i] = node;
    }
    const RootedTree grid(std::move(parent), std::move(weight), 0);
    std::vector<int> ga(leaf_of.begin(), leaf_of.begin() + n);
    std::vector<int> gb(leaf_of.begin() + n, leaf_of.end());
    r.tw = tree_wasserstein(grid, NodeMeasure::from_atoms(grid, ga, uniform),
                            NodeMeasure::from_atoms(grid, gb, uniform));
  }
  r.rhs = 0.5 * r.tw + r.slack;
  r.holds = r.w1 <= r.rhs;
  r.holds_rms = r.w2 <= r.rhs;
  r.holds_rms_geometric = r.w2 <= 0.5 * r.tw_geometric + r.slack;

  // Grid route: q_i = sum over level-i cells of min(#a, #b).
  for (int level = 0; level <= r.depth; ++level) {
    std::map<std::vector<std::uint32_t>, std::pair<long, long>> cells;
    for (std::size_t i = 0; i < 2 * n; ++i) {
      std::vector<std::uint32_t> key(paths[i].begin(), paths[i].begin() + level);
      auto& c = cells[key];
      (i < n ? c.first : c.second) += 1;
    }
    long matched = 0;
    for (const auto& [key, c] : cells) matched += std::min(c.first, c.second);
    r.unmatched_cells.push_back(static_cast<long>(n) - matched);
  }

  // Tree route: integer subtree counts; a leaf above level i stands for its
  // own single-point cell at every deeper level.
  std::vector<long> ca(tree.size(), 0), cb(tree.size(), 0);
  for (int v : nodes_a) ++ca[v];
  for (int v : nodes_b) ++cb[v];
  for (int v : tree.bottom_up_order())
    if (v != tree.root()) {
      ca[tree.parent(v)] += ca[v];
      cb[tree.parent(v)] += cb[v];
    }
  std::vector<char> is_leaf(tree.size(), 1);
  for (std::size_t v = 0; v < tree.size(); ++v)
    if (tree.parent(static_cast<int>(v)) != RootedTree::kNoParent) is_leaf[tree.parent(static_cast<int>(v))] = 0;
  for (int level = 0; level <= r.depth; ++level) {
    long twice = 0;
    for (std::size_t v = 0; v < tree.size(); ++v) {
      const int dv = tree.depth(static_cast<int>(v));
      if (dv == level || (is_leaf[v] && dv < level)) twice += std::labs(ca[v] - cb[v]);
    }
    r.unmatched_tree.push_back(twice / 2);
  }
  r.identity_holds = r.unmatched_cells == r.unmatched_tree;
  return r;
}

W2BoundReport check_w2_bound(const PointSet& a, const PointSet& b, int start_depth, Rng& rng) {
  if (a.dim() != b.dim()) throw ValidationError("check_w2_bound: dimension mismatch");
  return check_w2_bound(a, b, start_depth, expand_hypercube(PointSet::concat(a, b), rng));
}

std::vector<double> w2_matrix(std::span<const PointSet> clouds, int threads) {
  const std::size_t n = clouds.size();
  std::vector<double> w(n * n, 0.0);
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j)
      w[i * n + j] = optimal_assignment({clouds[i], clouds[j], 2.0}).value;
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) w[i * n + j] = w[j * n + i];
  return w;
}

double mean_nn_rank(std::span<const double> w2, std::span<const double> tsw, std::size_t n) {
  if (w2.size() != n * n || tsw.size() != n * n)
    throw ValidationError("mean_nn_rank: matrices must be n x n");
  if (n < 2) throw ValidationError("mean_nn_rank: need at least two measures");
  double total = 0.0;
  for (std::size_t q = 0; q < n; ++q) {
    std::size_t p = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == q) continue;
      if (p == n || tsw[q * n + j] < tsw[q * n + p]) p = j;
    }
    std::size_t rank = 1;
    for (std::size_t j = 0; j < n; ++j)
      if (j != q && j != p && w2[q * n + j] < w2[q * n + p]) ++rank;
    total += static_cast<double>(rank);
  }
  return total / static_cast<double>(n);
}

std::vector<RankRow> nn_rank_experiment(std::span<const PointSet> clouds,
                                        std::span<const double> w2, const NnRankConfig& cfg) {
  const std::size_t n = clouds.size();
  if (n < 2) throw ValidationError("nn_rank_experiment: need at least two clouds");
  if (cfg.slice_counts.empty())
    throw ValidationError("nn_rank_experiment: no slice counts given");
  const int max_slices = *std::max_element(cfg.slice_counts.begin(), cfg.slice_counts.end());
  if (*std::min_element(cfg.slice_counts.begin(), cfg.slice_counts.end()) < 1)
    throw ValidationError("nn_rank_experiment: slice counts must be positive");

  std::vector<DiscreteMeasure> measures;
  measures.reserve(n);
  for (const auto& c : clouds) measures.push_back(DiscreteMeasure::uniform(c));
  const auto ens = sample_ensemble(unique_supports(measures), max_slices, cfg.build, cfg.kind,
                                   cfg.seed, cfg.threads);
  const auto indexed = index_measures(ens, measures);
  std::vector<TswEmbedding> emb(n);
  parallel_for(n, cfg.threads, [&](std::size_t i) { emb[i] = embed_measure(ens, indexed[i]); });

  std::vector<RankRow> rows;
  std::vector<double> tsw(n * n, 0.0);
  for (int count : cfg.slice_counts) {
    parallel_for(n, cfg.threads, [&](std::size_t i) {
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) tsw[i * n + j] = embedding_distance(emb[i], emb[j], count);
    });
    rows.push_back({count, mean_nn_rank(w2, tsw, n)});
  }
  return rows;
}

std::vector<RankRow> nn_rank_experiment(std::span<const PointSet> clouds,
                                        const NnRankConfig& cfg) {
  return nn_rank_experiment(clouds, w2_matrix(clouds, cfg.threads), cfg);
}

}  // namespace tsw
