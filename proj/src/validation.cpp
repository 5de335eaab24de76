#include "tsw/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <bit>
#include <functional>
#include <limits>
#include <optional>
#include <json.hpp>
#include <numeric>

#include "tsw/analysis.hpp"
#include "tsw/datagen.hpp"
#include "tsw/error.hpp"
#include "tsw/io.hpp"
#include "tsw/kernel.hpp"
#include "tsw/parallel.hpp"
#include "tsw/transport.hpp"
#include "tsw/tree_build.hpp"

namespace tsw {

using nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Running hash over the exact decimal forms of every computed value.
class Digest {
 public:
  void add(double v) { add_text(format_double(v)); }
  void add(long long v) { add_text(std::to_string(v)); }
  void add_text(std::string_view s) {
    buf_.append(s);
    buf_.push_back(';');
  }
  std::string hex() const { return hex64(fnv1a64(buf_)); }

 private:
  std::string buf_;
};

ordered_json points_json(const PointSet& p) {
  ordered_json out = ordered_json::array();
  for (std::size_t i = 0; i < p.size(); ++i)
    out.push_back(std::vector<double>(p[i].begin(), p[i].end()));
  return out;
}

std::vector<double> dirichlet(std::size_t n, Rng& rng) {
  std::vector<double> w(n);
  for (double& x : w) x = standard_exponential(rng);
  return normalize(w);
}

// k distinct values from [0, n), in draw order.
std::vector<int> distinct_indices(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < k; ++i)
    std::swap(idx[i], idx[i + uniform_index(rng, n - i)]);
  idx.resize(k);
  return idx;
}

int pick(Rng& rng, int lo, int hi) {  // uniform on [lo, hi]
  return lo + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

SuiteResult finish(std::string name, bool pass, std::string summary, const Digest& dg,
                   const ordered_json& counterexample, Clock::time_point t0) {
  SuiteResult r;
  r.name = std::move(name);
  r.pass = pass;
  r.summary = std::move(summary);
  r.digest = dg.hex();
  if (!counterexample.is_null()) r.counterexample = counterexample.dump();
  r.seconds = seconds_since(t0);
  return r;
}

std::string fmt(double v) { return format_double(v); }

// Families shared by the nd and psd suites: 10 random measures in [0,1]^2,
// alternating partition and clustering ensembles.
struct Family {
  int index = 0;
  int n_slices = 0;
  TreeKind kind = TreeKind::Partition;
  GramMatrix distances;
};

constexpr int kSliceChoices[] = {1, 4, 10};

Family make_family(std::uint64_t seed, int f, int slice_choice, int threads) {
  Rng rng(derive_seed(derive_seed(seed, "nd-family"), static_cast<std::uint64_t>(f)));
  std::vector<DiscreteMeasure> ms;
  for (int k = 0; k < 10; ++k)
    ms.push_back(random_measure(2, static_cast<std::size_t>(pick(rng, 1, 8)), rng));
  const TreeKind kind = f % 2 == 0 ? TreeKind::Partition : TreeKind::Cluster;
  BuildConfig cfg;
  cfg.deepest_level = 5;
  cfg.kappa = 3;
  const int ns = kSliceChoices[slice_choice];
  const auto ens = sample_ensemble(unique_supports(ms), ns, cfg, kind,
                                   derive_seed(rng(), static_cast<std::uint64_t>(ns)), threads);
  auto d = tsw_matrix(ens, index_measures(ens, ms), threads);
  return {f, ns, kind, GramMatrix(10, std::move(d))};
}

}  // namespace

SuiteResult run_oracle_suite(const SuiteOptions& opt) {
  const auto t0 = Clock::now();
  const int trials = opt.trials > 0 ? opt.trials : 200;
  Digest dg;
  ordered_json cex;
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(derive_seed(opt.seed, "oracle"), static_cast<std::uint64_t>(trial)));
    const TreeKind kind = trial % 2 == 0 ? TreeKind::Partition : TreeKind::Cluster;
    BuildConfig cfg;
    cfg.edge_metric = trial % 4 < 2 ? EdgeMetric::Euclidean : EdgeMetric::L1;
    // Resample until the tree has at most 32 nodes.
    std::optional<BuiltTree> built;
    while (!built) {
      const auto d = static_cast<std::size_t>(pick(rng, 1, 3));
      const auto n = static_cast<std::size_t>(pick(rng, 2, 16));
      cfg.deepest_level = pick(rng, 1, 5);
      cfg.kappa = pick(rng, 2, 4);
      const PointSet pts = random_cloud(d, n, rng);
      auto t = kind == TreeKind::Partition ? build_partition_tree(pts, cfg, rng)
                                           : build_clustering_tree(pts, cfg, rng);
      if (t.tree.size() <= 32) built = std::move(t);
    }
    const RootedTree& tree = built->tree;
    const std::size_t cap = std::min<std::size_t>(20, tree.size());
    const auto na = distinct_indices(tree.size(), static_cast<std::size_t>(pick(rng, 1, static_cast<int>(cap))), rng);
    const auto nb = distinct_indices(tree.size(), static_cast<std::size_t>(pick(rng, 1, static_cast<int>(cap))), rng);
    const auto wa = dirichlet(na.size(), rng);
    const auto wb = dirichlet(nb.size(), rng);
    const double tw = tree_wasserstein(tree, NodeMeasure::from_atoms(tree, na, wa),
                                       NodeMeasure::from_atoms(tree, nb, wb));
    const double ot = exact_ot(CostMatrix::tree_metric(tree, na, nb), wa, wb);
    dg.add(tw);
    dg.add(ot);
    const double err = std::abs(tw - ot);
    worst = std::max(worst, err);
    if (err > 1e-9 && cex.is_null()) {
      cex = {{"trial", trial}, {"kind", to_string(kind)}, {"tree", ordered_json::parse(tree_to_json(tree))},
             {"nodes_a", na}, {"weights_a", wa}, {"nodes_b", nb}, {"weights_b", wb},
             {"tree_wasserstein", tw}, {"exact_ot", ot}};
    }
  }
  return finish("oracle", cex.is_null(),
                std::to_string(trials) + " trees, max |TW - OT| = " + fmt(worst), dg, cex, t0);
}

SuiteResult run_nd_suite(const SuiteOptions& opt) {
  const auto t0 = Clock::now();
  const int families = opt.trials > 0 ? opt.trials : 100;
  Digest dg;
  ordered_json cex;
  double worst_q = -std::numeric_limits<double>::infinity();
  double worst_eig = std::numeric_limits<double>::infinity();
  for (int f = 0; f < families; ++f) {
    for (int s = 0; s < 3; ++s) {
      const Family fam = make_family(opt.seed, f, s, opt.threads);
      Rng rng(derive_seed(derive_seed(opt.seed, "nd-vectors"),
                          static_cast<std::uint64_t>(3 * f + s)));
      const NdReport rep = check_negative_definite(fam.distances, 100, rng);
      for (double v : fam.distances.entries()) dg.add(v);
      dg.add(rep.max_quadratic_form);
      worst_q = std::max(worst_q, rep.max_quadratic_form);
      worst_eig = std::min(worst_eig, rep.min_centered_eigenvalue);
      if (!rep.pass() && cex.is_null())
        cex = {{"family", f}, {"n_slices", fam.n_slices}, {"kind", to_string(fam.kind)},
               {"distances", fam.distances.entries()}, {"max_quadratic_form", rep.max_quadratic_form},
               {"min_centered_eigenvalue", rep.min_centered_eigenvalue},
               {"worst_vector", rep.worst_vector}};
    }
  }
  // Zero-diagonal symmetric matrix that is not negative definite: c = (1, -2, 1)
  // gives c^T D c = 10.
  const GramMatrix control(3, {0, 1, 9, 1, 0, 1, 9, 1, 0});
  Rng crng(derive_seed(opt.seed, "nd-control"));
  const NdReport crep = check_negative_definite(control, 100, crng);
  dg.add(crep.max_quadratic_form);
  dg.add(crep.min_centered_eigenvalue);
  if (crep.pass() && cex.is_null())
    cex = {{"negative_control", control.entries()},
           {"max_quadratic_form", crep.max_quadratic_form},
           {"min_centered_eigenvalue", crep.min_centered_eigenvalue}};
  const std::string summary = std::to_string(3 * families) + " TSW matrices, max c'Dc = " +
                              fmt(worst_q) + ", min centered eigenvalue = " + fmt(worst_eig) +
                              ", control " + (crep.pass() ? "passed (wrong)" : "rejected");
  return finish("nd", cex.is_null(), summary, dg, cex, t0);
}

SuiteResult run_psd_suite(const SuiteOptions& opt) {
  const auto t0 = Clock::now();
  const int families = opt.trials > 0 ? opt.trials : 100;
  Digest dg;
  ordered_json cex;
  double worst_eig = std::numeric_limits<double>::infinity();
  double worst_pow = 0.0;
  for (int f = 0; f < families; ++f) {
    for (int s = 0; s < 3; ++s) {
      const Family fam = make_family(opt.seed, f, s, opt.threads);
      for (double t : {0.1, 1.0, 10.0}) {
        const GramMatrix k = gram(fam.distances, t);
        const double ev = min_eigenvalue(k);
        dg.add(ev);
        worst_eig = std::min(worst_eig, ev);
        double pow_err = 0.0;
        for (int i : {2, 3, 4}) {
          const GramMatrix kp = gram_power(gram(fam.distances, t / i), i);
          for (std::size_t e = 0; e < k.entries().size(); ++e)
            pow_err = std::max(pow_err, std::abs(kp.entries()[e] - k.entries()[e]));
        }
        dg.add(pow_err);
        worst_pow = std::max(worst_pow, pow_err);
        if ((ev < -1e-8 || pow_err > 1e-12) && cex.is_null())
          cex = {{"family", f}, {"n_slices", fam.n_slices}, {"t", t},
                 {"distances", fam.distances.entries()}, {"min_eigenvalue", ev},
                 {"power_error", pow_err}};
      }
    }
  }
  return finish("psd", cex.is_null(),
                std::to_string(9 * families) + " Gram matrices, min eigenvalue = " +
                    fmt(worst_eig) + ", max power-identity error = " + fmt(worst_pow),
                dg, cex, t0);
}

SuiteResult run_bound_suite(const SuiteOptions& opt) {
  const auto t0 = Clock::now();
  const int trials = opt.trials > 0 ? opt.trials : 100;
  Digest dg;
  ordered_json cex;
  double min_slack = std::numeric_limits<double>::infinity();
  int max_depth = 0;
  int rms_fail = 0, geo_fail = 0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(derive_seed(opt.seed, "bound"), static_cast<std::uint64_t>(trial)));
    const auto d = static_cast<std::size_t>(pick(rng, 1, 3));
    const auto n = static_cast<std::size_t>(pick(rng, 1, 30));
    // Coordinates on a lattice of spacing 1/m, m <= 32: distinct points then
    // differ by at least 1/32 on some axis while level-8 cells of a root cube
    // of side at most 2 have side 1/128, so separation happens by depth 8.
    const int m = pick(rng, 2, 32);
    auto lattice_cloud = [&] {
      std::vector<double> c(n * d);
      for (double& x : c) x = static_cast<double>(pick(rng, 0, m)) / m;
      return PointSet(d, std::move(c));
    };
    const PointSet a = lattice_cloud();
    const PointSet b = lattice_cloud();
    const W2BoundReport rep = check_w2_bound(a, b, 1, rng);
    dg.add(rep.w1);
    dg.add(rep.w2);
    dg.add(rep.tw);
    dg.add(rep.tw_geometric);
    dg.add(static_cast<long long>(rep.depth));
    for (long v : rep.unmatched_cells) dg.add(static_cast<long long>(v));
    min_slack = std::min(min_slack, rep.rhs - rep.w1);
    rms_fail += rep.holds_rms ? 0 : 1;
    geo_fail += rep.holds_rms_geometric ? 0 : 1;
    max_depth = std::max(max_depth, rep.depth);
    const bool ok = rep.holds && rep.identity_holds && rep.depth <= 8;
    if (!ok && cex.is_null())
      cex = {{"trial", trial}, {"a", points_json(a)}, {"b", points_json(b)},
             {"depth", rep.depth}, {"beta", rep.beta}, {"w1", rep.w1}, {"w2", rep.w2},
             {"tw", rep.tw}, {"tw_geometric", rep.tw_geometric},
             {"rhs", rep.rhs}, {"unmatched_cells", rep.unmatched_cells},
             {"unmatched_tree", rep.unmatched_tree}};
  }
  return finish("bound", cex.is_null(),
                std::to_string(trials) + " cloud pairs, min slack rhs - W = " + fmt(min_slack) +
                    ", max separation depth = " + std::to_string(max_depth) +
                    "; RMS variant fails " + std::to_string(rms_fail) +
                    ", RMS on geometric tree fails " + std::to_string(geo_fail),
                dg, cex, t0);
}

SuiteResult run_chain_suite(const SuiteOptions& opt) {
  const auto t0 = Clock::now();
  const int trials = opt.trials > 0 ? opt.trials : 100;
  Digest dg;
  ordered_json cex;
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(derive_seed(opt.seed, "chain"), static_cast<std::uint64_t>(trial)));
    const auto d = static_cast<std::size_t>(pick(rng, 1, 5));
    const auto n = static_cast<std::size_t>(pick(rng, 1, 50));
    const PointSet a = random_cloud(d, n, rng);
    const PointSet b = random_cloud(d, n, rng);
    std::vector<double> theta(d);
    double norm = 0.0;
    for (double& x : theta) {
      x = standard_normal(rng);
      norm += x * x;
    }
    norm = std::sqrt(norm);
    std::vector<double> pa(n), pb(n), all;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        pa[i] += a[i][k] * theta[k] / norm;
        pb[i] += b[i][k] * theta[k] / norm;
      }
    }
    all = pa;
    all.insert(all.end(), pb.begin(), pb.end());
    const BuiltTree chain = build_chain_tree(all);
    std::vector<int> na(chain.point_to_node.begin(), chain.point_to_node.begin() + n);
    std::vector<int> nb(chain.point_to_node.begin() + n, chain.point_to_node.end());
    const std::vector<double> ones(n, 1.0);
    const double tw = tree_wasserstein(chain.tree, NodeMeasure::from_atoms(chain.tree, na, ones),
                                       NodeMeasure::from_atoms(chain.tree, nb, ones));
    const double w1 = wasserstein_1d(pa, pb);
    dg.add(tw);
    dg.add(w1);
    worst = std::max(worst, std::abs(tw - w1));
    if (std::abs(tw - w1) > 1e-9 && cex.is_null())
      cex = {{"trial", trial}, {"projected_a", pa}, {"projected_b", pb},
             {"chain_tw", tw}, {"quantile_w1", w1}};
  }
  return finish("chain", cex.is_null(),
                std::to_string(trials) + " projections, max |TW - W1| = " + fmt(worst), dg, cex,
                t0);
}

SuiteResult run_cluster_suite(const SuiteOptions& opt) {
  (void)opt;
  const auto t0 = Clock::now();
  PointSet grid(2);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 4; ++x) grid.push_back(std::vector<double>{double(x), double(y)});
  const std::size_t g = grid.size();
  Digest dg;
  ordered_json cex;
  long long runs = 0;
  double worst_ratio = 0.0;
  for (std::uint32_t mask = 1; mask < (1u << g); ++mask) {
    if (std::popcount(mask) > 8) continue;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < g; ++i)
      if (mask >> i & 1u) idx.push_back(i);
    const PointSet pts = grid.subset(idx);
    const std::size_t n = pts.size();
    for (int kappa = 1; kappa <= 3; ++kappa) {
      // Optimal k-center radius over all center subsets of size min(kappa, n).
      const std::size_t k = std::min<std::size_t>(kappa, n);
      double opt_r = std::numeric_limits<double>::infinity();
      std::vector<char> sel(n, 0);
      std::fill(sel.begin(), sel.begin() + k, 1);
      do {
        double r = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
          double best = std::numeric_limits<double>::infinity();
          for (std::size_t c = 0; c < n; ++c)
            if (sel[c]) best = std::min(best, euclidean(pts[p], pts[c]));
          r = std::max(r, best);
        }
        opt_r = std::min(opt_r, r);
      } while (std::prev_permutation(sel.begin(), sel.end()));
      dg.add(opt_r);
      for (std::size_t first = 0; first < n; ++first) {
        const Clustering cl = farthest_point_clustering(pts, kappa, first);
        ++runs;
        dg.add(cl.radius);
        if (opt_r > 0.0) worst_ratio = std::max(worst_ratio, cl.radius / opt_r);
        if (cl.radius > 2.0 * opt_r + 1e-12 && cex.is_null())
          cex = {{"points", points_json(pts)}, {"kappa", kappa}, {"first_center", first},
                 {"radius", cl.radius}, {"optimal_radius", opt_r}};
      }
    }
  }
  return finish("cluster", cex.is_null(),
                std::to_string(runs) + " greedy runs, max radius / optimum = " + fmt(worst_ratio),
                dg, cex, t0);
}

SuiteResult run_golden_suite(const SuiteOptions& opt) {
  (void)opt;
  const auto t0 = Clock::now();
  const PointSet pts{{6, 6}, {5, 3}, {6.5, 3.5}, {6.5, 2.5}, {7.5, 2.5}, {2, 2}, {7, 1}};
  const Hypercube cube{{0.0, 0.0}, 8.0};
  Digest dg;
  ordered_json cex;
  for (int h : {3, 4, 6}) {
    BuildConfig cfg;
    cfg.deepest_level = h;
    const BuiltTree t = build_partition_tree(pts, cube, cfg);
    const auto nodes = static_cast<long long>(t.tree.size());
    dg.add(nodes);
    dg.add(static_cast<long long>(t.tree.max_depth()));
    for (int v : t.point_to_node) dg.add(static_cast<long long>(v));
    if ((nodes != 10 || t.tree.max_depth() != 3) && cex.is_null())
      cex = {{"deepest_level", h}, {"nodes", nodes}, {"edges", nodes - 1},
             {"max_depth", t.tree.max_depth()}};
  }
  return finish("golden", cex.is_null(), "seven points: 10 nodes, 9 edges, deepest level 3 for H in {3,4,6}",
                dg, cex, t0);
}

SuiteResult run_rank_suite(const SuiteOptions& opt) {
  const auto t0 = Clock::now();
  OrbitConfig oc;
  oc.seed = derive_seed(opt.seed, "rank-orbits");
  if (opt.trials > 0) oc.orbits_per_class = opt.trials;
  const auto data = generate_orbit_dataset(oc);
  std::vector<PointSet> clouds;
  Rng sub(derive_seed(opt.seed, "rank-subsample"));
  for (const auto& c : data) clouds.push_back(subsample(c.points, 50, sub));

  NnRankConfig cfg;
  cfg.seed = derive_seed(opt.seed, "rank-trees");
  cfg.threads = opt.threads;
  const auto rows = nn_rank_experiment(clouds, cfg);
  Digest dg;
  std::string table;
  for (const auto& r : rows) {
    dg.add(static_cast<long long>(r.n_slices));
    dg.add(r.mean_rank);
    table += " n_s=" + std::to_string(r.n_slices) + ":" + fmt(r.mean_rank);
  }
  const double first = rows.front().mean_rank, last = rows.back().mean_rank;
  ordered_json cex;
  const bool pass = last <= first + 0.5;
  if (!pass) {
    ordered_json tab = ordered_json::array();
    for (const auto& r : rows) tab.push_back({{"n_slices", r.n_slices}, {"mean_rank", r.mean_rank}});
    cex = {{"mean_rank", tab}};
  }
  return finish("rank", pass,
                std::to_string(clouds.size()) + " clouds, mean W2 rank of TSW neighbor:" + table,
                dg, cex, t0);
}

SuiteResult run_perf_suite(const SuiteOptions& opt) {
  const auto t0 = Clock::now();
  Rng rng(derive_seed(opt.seed, "perf"));
  const DiscreteMeasure a = random_measure(2, 1000, rng);
  const DiscreteMeasure b = random_measure(2, 1000, rng);
  const std::vector<DiscreteMeasure> ms{a, b};
  BuildConfig cfg;
  const auto ens = sample_ensemble(unique_supports(ms), 10, cfg, TreeKind::Partition,
                                   derive_seed(opt.seed, "perf-trees"), 1);
  const auto idx = index_measures(ens, ms);
  const CostMatrix costs = CostMatrix::euclidean(a.supports(), b.supports());

  auto median_time = [](const std::function<double()>& f, double& value) {
    std::vector<double> times;
    for (int r = 0; r < 5; ++r) {
      const auto s = Clock::now();
      value = f();
      times.push_back(seconds_since(s));
    }
    std::sort(times.begin(), times.end());
    return times[2];
  };
  double tsw_value = 0.0, ot_value = 0.0;
  const double t_tsw = median_time(
      [&] { return tree_sliced_wasserstein(ens, idx[0], idx[1]); }, tsw_value);
  const double t_ot = median_time(
      [&] { return exact_ot(costs, a.weights(), b.weights(), 1000 * 1000); }, ot_value);
  Digest dg;
  dg.add(tsw_value);
  dg.add(ot_value);
  const double speedup = t_ot / std::max(t_tsw, 1e-12);
  ordered_json cex;
  if (speedup < 10.0)
    cex = {{"tsw_seconds", t_tsw}, {"exact_ot_seconds", t_ot}, {"speedup", speedup}};
  return finish("perf", speedup >= 10.0,
                "median TSW " + fmt(t_tsw) + " s, exact OT " + fmt(t_ot) + " s, speedup " +
                    fmt(speedup),
                dg, cex, t0);
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"oracle", "nd",     "psd",  "bound", "chain",
                                              "cluster", "golden", "rank", "perf"};
  return names;
}

std::vector<SuiteResult> run_suite(std::string_view name, const SuiteOptions& opt) {
  static const std::vector<std::pair<std::string, SuiteResult (*)(const SuiteOptions&)>> table{
      {"oracle", run_oracle_suite}, {"nd", run_nd_suite},         {"psd", run_psd_suite},
      {"bound", run_bound_suite},   {"chain", run_chain_suite},   {"cluster", run_cluster_suite},
      {"golden", run_golden_suite}, {"rank", run_rank_suite},     {"perf", run_perf_suite}};
  std::vector<SuiteResult> out;
  for (const auto& [n, fn] : table) {
    if (name == n || (name == "all" && n != "perf")) out.push_back(fn(opt));
  }
  if (out.empty()) throw ValidationError("unknown suite '" + std::string(name) + "'");
  return out;
}

}  // namespace tsw
