#include "tsw/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <string>

#include "tsw/error.hpp"
#include "tsw/parallel.hpp"

namespace tsw {

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_)
    throw ValidationError("cost matrix: expected " + std::to_string(rows_ * cols_) +
                          " entries, got " + std::to_string(entries_.size()));
  for (double c : entries_)
    if (!(c >= 0.0) || !std::isfinite(c))
      throw ValidationError("cost matrix: entries must be finite and nonnegative");
}

CostMatrix CostMatrix::euclidean(const PointSet& a, const PointSet& b) {
  return powered_euclidean(a, b, 1.0);
}

CostMatrix CostMatrix::powered_euclidean(const PointSet& a, const PointSet& b, double p) {
  if (a.dim() != b.dim()) throw ValidationError("cost matrix: dimension mismatch");
  std::vector<double> c(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double sq = squared_euclidean(a[i], b[j]);
      c[i * b.size() + j] = p == 2.0 ? sq : p == 1.0 ? std::sqrt(sq) : std::pow(sq, 0.5 * p);
    }
  return CostMatrix(a.size(), b.size(), std::move(c));
}

CostMatrix CostMatrix::tree_metric(const RootedTree& tree, std::span<const int> a,
                                   std::span<const int> b) {
  std::vector<double> c(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i * b.size() + j] = path_length(tree, a[i], b[j]);
  return CostMatrix(a.size(), b.size(), std::move(c));
}

double tree_wasserstein(const RootedTree& tree, const NodeMeasure& mu, const NodeMeasure& nu) {
  if (mu.tree_fingerprint() != tree.fingerprint() || nu.tree_fingerprint() != tree.fingerprint())
    throw ValidationError("tree_wasserstein: measures are not defined on this tree");
  // Subtree sums of mu - nu, accumulated children-first.
  std::vector<double> diff(tree.size());
  for (std::size_t v = 0; v < tree.size(); ++v) diff[v] = mu.mass()[v] - nu.mass()[v];
  double total = 0.0;
  for (int v : tree.bottom_up_order()) {
    if (v == tree.root()) continue;
    total += tree.edge_weight(v) * std::abs(diff[v]);
    diff[tree.parent(v)] += diff[v];
  }
  return total;
}

namespace {

std::string format_point(std::span<const double> p) {
  std::ostringstream out;
  out.precision(17);
  out << '(';
  for (std::size_t k = 0; k < p.size(); ++k) out << (k ? ", " : "") << p[k];
  out << ')';
  return out.str();
}

}  // namespace

std::vector<IndexedMeasure> index_measures(const TreeEnsemble& ens,
                                           std::span<const DiscreteMeasure> ms) {
  std::map<std::vector<double>, std::size_t> lookup;
  for (std::size_t i = 0; i < ens.points.size(); ++i) {
    auto p = ens.points[i];
    lookup.emplace(std::vector<double>(p.begin(), p.end()), i);
  }
  std::vector<IndexedMeasure> out;
  out.reserve(ms.size());
  for (std::size_t k = 0; k < ms.size(); ++k) {
    const auto& m = ms[k];
    IndexedMeasure im;
    im.weights = m.weights();
    for (std::size_t i = 0; i < m.size(); ++i) {
      auto p = m.supports()[i];
      auto it = lookup.find(std::vector<double>(p.begin(), p.end()));
      if (it == lookup.end())
        throw ValidationError("support point " + format_point(p) + " of measure " +
                              std::to_string(k) + " is not mapped in slice 0");
      im.points.push_back(it->second);
    }
    out.push_back(std::move(im));
  }
  return out;
}

IndexedMeasure index_measure(const TreeEnsemble& ens, const DiscreteMeasure& m) {
  return index_measures(ens, std::span(&m, 1)).front();
}

namespace {

void check_indexed(const TreeEnsemble& ens, const IndexedMeasure& m) {
  if (m.points.size() != m.weights.size() || m.points.empty())
    throw ValidationError("indexed measure: need matching, non-empty points and weights");
  for (std::size_t s = 0; s < ens.n_slices(); ++s) {
    const auto& p2n = ens.point_to_node[s];
    for (std::size_t i : m.points)
      if (i >= p2n.size() || p2n[i] < 0 || static_cast<std::size_t>(p2n[i]) >= ens.trees[s].size())
        throw ValidationError("support point " + std::to_string(i) + " is not mapped in slice " +
                              std::to_string(s));
  }
}

std::vector<int> nodes_of(const TreeEnsemble& ens, std::size_t s, const IndexedMeasure& m) {
  std::vector<int> nodes;
  nodes.reserve(m.points.size());
  for (std::size_t i : m.points) nodes.push_back(ens.point_to_node[s][i]);
  return nodes;
}

}  // namespace

double tree_sliced_wasserstein(const TreeEnsemble& ens, const IndexedMeasure& mu,
                               const IndexedMeasure& nu) {
  if (ens.n_slices() == 0) throw ValidationError("tree_sliced_wasserstein: empty ensemble");
  check_indexed(ens, mu);
  check_indexed(ens, nu);
  double total = 0.0;
  for (std::size_t s = 0; s < ens.n_slices(); ++s) {
    const auto& tree = ens.trees[s];
    const auto a = NodeMeasure::from_atoms(tree, nodes_of(ens, s, mu), mu.weights);
    const auto b = NodeMeasure::from_atoms(tree, nodes_of(ens, s, nu), nu.weights);
    total += tree_wasserstein(tree, a, b);
  }
  return total / static_cast<double>(ens.n_slices());
}

TswEmbedding embed_measure(const TreeEnsemble& ens, const IndexedMeasure& m) {
  check_indexed(ens, m);
  TswEmbedding out;
  out.slices.resize(ens.n_slices());
  std::vector<double> scratch;
  std::vector<int> touched;
  for (std::size_t s = 0; s < ens.n_slices(); ++s) {
    const auto& tree = ens.trees[s];
    scratch.assign(tree.size(), 0.0);
    touched.clear();
    std::vector<char> seen(tree.size(), 0);
    for (std::size_t a = 0; a < m.points.size(); ++a) {
      for (int v = ens.point_to_node[s][m.points[a]]; v != tree.root(); v = tree.parent(v)) {
        scratch[v] += m.weights[a];
        if (!seen[v]) {
          seen[v] = 1;
          touched.push_back(v);
        }
      }
    }
    std::sort(touched.begin(), touched.end());
    auto& vec = out.slices[s];
    vec.reserve(touched.size());
    for (int v : touched) vec.emplace_back(v, tree.edge_weight(v) * scratch[v]);
  }
  return out;
}

double embedding_distance(const TswEmbedding& a, const TswEmbedding& b, std::size_t n_slices) {
  if (a.slices.size() != b.slices.size())
    throw ValidationError("embedding_distance: embeddings come from different ensembles");
  const std::size_t n = n_slices == 0 ? a.slices.size() : n_slices;
  if (n > a.slices.size() || n == 0)
    throw ValidationError("embedding_distance: slice count out of range");
  double total = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const auto& x = a.slices[s];
    const auto& y = b.slices[s];
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() || j < y.size()) {
      if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
        d += std::abs(x[i++].second);
      } else if (i == x.size() || y[j].first < x[i].first) {
        d += std::abs(y[j++].second);
      } else {
        d += std::abs(x[i++].second - y[j++].second);
      }
    }
    total += d;
  }
  return total / static_cast<double>(n);
}

std::vector<double> tsw_matrix(const TreeEnsemble& ens, std::span<const IndexedMeasure> ms,
                               int threads) {
  const std::size_t n = ms.size();
  std::vector<TswEmbedding> emb(n);
  parallel_for(n, threads, [&](std::size_t i) { emb[i] = embed_measure(ens, ms[i]); });
  std::vector<double> d(n * n, 0.0);
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = embedding_distance(emb[i], emb[j]);
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) d[i * n + j] = d[j * n + i];
  return d;
}

double wasserstein_1d(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty())
    throw ValidationError("wasserstein_1d: samples must be non-empty and of equal size");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
  return s / static_cast<double>(x.size());
}

double sliced_wasserstein_1d(const PointSet& a, const PointSet& b, int n_dirs, Rng& rng) {
  if (a.size() != b.size() || a.empty())
    throw ValidationError("sliced_wasserstein_1d: clouds must have equal, nonzero cardinality "
                          "(got " + std::to_string(a.size()) + " and " +
                          std::to_string(b.size()) + ")");
  if (a.dim() != b.dim()) throw ValidationError("sliced_wasserstein_1d: dimension mismatch");
  if (n_dirs < 1) throw ValidationError("sliced_wasserstein_1d: need at least one direction");
  const std::size_t d = a.dim();
  std::vector<double> dir(d), pa(a.size()), pb(b.size());
  double total = 0.0;
  for (int t = 0; t < n_dirs; ++t) {
    double norm = 0.0;
    do {
      norm = 0.0;
      for (double& x : dir) {
        x = standard_normal(rng);
        norm += x * x;
      }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (double& x : dir) x /= norm;
    for (std::size_t i = 0; i < a.size(); ++i) {
      double sa = 0.0, sb = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        sa += a[i][k] * dir[k];
        sb += b[i][k] * dir[k];
      }
      pa[i] = sa;
      pb[i] = sb;
    }
    total += wasserstein_1d(pa, pb);
  }
  return total / n_dirs;
}

double wasserstein_1d_weighted(std::span<const double> xa, std::span<const double> wa,
                               std::span<const double> xb, std::span<const double> wb) {
  if (xa.size() != wa.size() || xb.size() != wb.size())
    throw ValidationError("wasserstein_1d_weighted: values and weights differ in length");
  const auto na = normalize(wa), nb = normalize(wb);
  // Merge both atom lists; +w for a, -w for b, then integrate |cumulative sum|.
  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(xa.size() + xb.size());
  for (std::size_t i = 0; i < xa.size(); ++i) atoms.emplace_back(xa[i], na[i]);
  for (std::size_t i = 0; i < xb.size(); ++i) atoms.emplace_back(xb[i], -nb[i]);
  std::sort(atoms.begin(), atoms.end());
  double cdf = 0.0, total = 0.0;
  for (std::size_t k = 0; k + 1 < atoms.size(); ++k) {
    cdf += atoms[k].second;
    total += std::abs(cdf) * (atoms[k + 1].first - atoms[k].first);
  }
  return total;
}

PointSet random_directions(std::size_t d, int n, Rng& rng) {
  if (d == 0 || n < 1) throw ValidationError("random_directions: need d >= 1 and n >= 1");
  PointSet out(d);
  std::vector<double> dir(d);
  for (int t = 0; t < n; ++t) {
    double norm = 0.0;
    do {
      norm = 0.0;
      for (double& x : dir) {
        x = standard_normal(rng);
        norm += x * x;
      }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (double& x : dir) x /= norm;
    out.push_back(dir);
  }
  return out;
}

double sliced_wasserstein(const DiscreteMeasure& a, const DiscreteMeasure& b,
                          const PointSet& directions) {
  if (a.dim() != b.dim() || directions.dim() != a.dim())
    throw ValidationError("sliced_wasserstein: dimension mismatch");
  if (directions.empty()) throw ValidationError("sliced_wasserstein: no directions");
  auto project = [](const PointSet& pts, std::span<const double> dir) {
    std::vector<double> out(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t k = 0; k < dir.size(); ++k) out[i] += pts[i][k] * dir[k];
    return out;
  };
  double total = 0.0;
  for (std::size_t t = 0; t < directions.size(); ++t) {
    const auto pa = project(a.supports(), directions[t]);
    const auto pb = project(b.supports(), directions[t]);
    total += wasserstein_1d_weighted(pa, a.weights(), pb, b.weights());
  }
  return total / static_cast<double>(directions.size());
}

namespace {

void check_simplex(std::span<const double> w, const char* name) {
  double total = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x))
      throw ValidationError(std::string("exact_ot: ") + name +
                            " weights must be finite and nonnegative");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ValidationError(std::string("exact_ot: ") + name + " weights do not sum to 1");
}

}  // namespace

TransportPlan solve_transport(const CostMatrix& C, std::span<const double> mu,
                              std::span<const double> nu, std::size_t max_entries) {
  const std::size_t n = C.rows(), m = C.cols();
  if (mu.size() != n || nu.size() != m)
    throw ValidationError("exact_ot: weight vectors do not match the cost matrix shape");
  if (n * m > max_entries)
    throw ValidationError("exact_ot: problem has " + std::to_string(n * m) +
                          " cost entries, above the limit of " + std::to_string(max_entries));
  check_simplex(mu, "source");
  check_simplex(nu, "target");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> supply(mu.begin(), mu.end()), demand(nu.begin(), nu.end());
  std::vector<double> flow(n * m, 0.0);
  // Rows carrying positive flow into each column (backward residual arcs).
  std::vector<std::vector<std::size_t>> col_rows(m);
  std::vector<char> listed(n * m, 0);

  // Potentials keep reduced costs nonnegative: row i, column j, sink T.
  std::vector<double> pr(n, 0.0), pc(m, kInf);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) pc[j] = std::min(pc[j], C(i, j));
  double pt = *std::min_element(pc.begin(), pc.end());

  // Node ids: rows [0, n), columns [n, n + m), sink n + m.
  const std::size_t sink = n + m;
  std::vector<double> dist(n + m + 1);
  std::vector<char> done(n + m + 1);
  std::vector<std::size_t> prev(n + m + 1);
  using Entry = std::pair<double, std::size_t>;

  for (;;) {
    bool any_supply = false;
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(done.begin(), done.end(), 0);
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    for (std::size_t i = 0; i < n; ++i)
      if (supply[i] > 0.0) {
        any_supply = true;
        dist[i] = 0.0;
        prev[i] = sink;  // marks a path start
        heap.emplace(0.0, i);
      }
    if (!any_supply) break;

    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (done[u]) continue;
      done[u] = 1;
      if (u == sink) break;
      if (u < n) {
        for (std::size_t j = 0; j < m; ++j) {
          const std::size_t v = n + j;
          if (done[v]) continue;
          const double nd = d + std::max(0.0, C(u, j) + pr[u] - pc[j]);
          if (nd < dist[v]) {
            dist[v] = nd;
            prev[v] = u;
            heap.emplace(nd, v);
          }
        }
      } else {
        const std::size_t j = u - n;
        if (demand[j] > 0.0) {
          const double nd = d + std::max(0.0, pc[j] - pt);
          if (nd < dist[sink]) {
            dist[sink] = nd;
            prev[sink] = u;
            heap.emplace(nd, sink);
          }
        }
        for (std::size_t i : col_rows[j]) {
          if (done[i] || flow[i * m + j] <= 0.0) continue;
          const double nd = d + std::max(0.0, pc[j] - C(i, j) - pr[i]);
          if (nd < dist[i]) {
            dist[i] = nd;
            prev[i] = u;
            heap.emplace(nd, i);
          }
        }
      }
    }
    if (!done[sink]) break;  // no deficit column reachable

    const double D = dist[sink];
    for (std::size_t i = 0; i < n; ++i) pr[i] += std::min(dist[i], D);
    for (std::size_t j = 0; j < m; ++j) pc[j] += std::min(dist[n + j], D);
    pt += D;

    // Bottleneck along sink <- column <- row <- column ... <- source row.
    const std::size_t last_col = prev[sink] - n;
    double delta = demand[last_col];
    std::size_t start_row = 0;
    for (std::size_t v = prev[sink];;) {
      const std::size_t row = prev[v];
      if (prev[row] == sink) {
        start_row = row;
        break;
      }
      const std::size_t j = prev[row] - n;
      delta = std::min(delta, flow[row * m + j]);
      v = prev[row];
    }
    delta = std::min(delta, supply[start_row]);

    for (std::size_t v = prev[sink];;) {
      const std::size_t j = v - n;
      const std::size_t row = prev[v];
      flow[row * m + j] += delta;
      if (!listed[row * m + j]) {
        listed[row * m + j] = 1;
        col_rows[j].push_back(row);
      }
      if (prev[row] == sink) break;
      const std::size_t back = prev[row] - n;
      double& f = flow[row * m + back];
      f = f == delta ? 0.0 : f - delta;
      v = prev[row];
    }
    supply[start_row] = supply[start_row] == delta ? 0.0 : supply[start_row] - delta;
    demand[last_col] = demand[last_col] == delta ? 0.0 : demand[last_col] - delta;
    // Residues at rounding level would otherwise cost one extra round each.
    if (supply[start_row] < 1e-15) supply[start_row] = 0.0;
    if (demand[last_col] < 1e-15) demand[last_col] = 0.0;
  }

  double leftover = 0.0;
  for (double s : supply) leftover += s;
  if (leftover > 1e-9)
    throw ValidationError("exact_ot: could not route all mass (residual " +
                          std::to_string(leftover) + ")");

  TransportPlan out;
  out.plan = std::move(flow);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) out.cost += out.plan[i * m + j] * C(i, j);
  return out;
}

double exact_ot(const CostMatrix& costs, std::span<const double> mu, std::span<const double> nu,
                std::size_t max_entries) {
  return solve_transport(costs, mu, nu, max_entries).cost;
}

std::pair<double, std::vector<std::size_t>> solve_assignment(const CostMatrix& C) {
  const std::size_t n = C.rows();
  if (C.cols() != n) throw ValidationError("assignment: cost matrix must be square");
  if (n == 0) return {0.0, {}};
  if (n > kAssignmentMaxSize)
    throw ValidationError("assignment: size " + std::to_string(n) + " exceeds the limit of " +
                          std::to_string(kAssignmentMaxSize));
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Shortest augmenting paths with row/column potentials; 1-based, column 0
  // is a virtual start.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = C(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> perm(n);
  for (std::size_t j = 1; j <= n; ++j) perm[match[j] - 1] = j - 1;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += C(i, perm[i]);
  return {total, std::move(perm)};
}

AssignmentResult optimal_assignment(const AssignmentProblem& problem) {
  if (problem.a.size() != problem.b.size())
    throw ValidationError("optimal_assignment: clouds have " + std::to_string(problem.a.size()) +
                          " and " + std::to_string(problem.b.size()) + " points");
  if (problem.a.empty()) throw ValidationError("optimal_assignment: empty clouds");
  if (!(problem.exponent >= 1.0))
    throw ValidationError("optimal_assignment: cost exponent must be >= 1");
  const auto C = CostMatrix::powered_euclidean(problem.a, problem.b, problem.exponent);
  auto [total, perm] = solve_assignment(C);
  const double mean = total / static_cast<double>(problem.a.size());
  const double value = problem.exponent == 1.0   ? mean
                       : problem.exponent == 2.0 ? std::sqrt(mean)
                                                 : std::pow(mean, 1.0 / problem.exponent);
  return {value, std::move(perm)};
}

}  // namespace tsw
