// tsw: orbit generation, tree ensembles, TSW/SW/exact distance matrices,
// Gram matrices and the validation suites.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "tsw/datagen.hpp"
#include "tsw/error.hpp"
#include "tsw/io.hpp"
#include "tsw/kernel.hpp"
#include "tsw/parallel.hpp"
#include "tsw/transport.hpp"
#include "tsw/tree_build.hpp"
#include "tsw/validation.hpp"

namespace {

using namespace tsw;
using Clock = std::chrono::steady_clock;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitIo = 4;

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void write_with_manifest(const std::string& out, const std::string& content, RunManifest& m,
                         Clock::time_point t0) {
  write_text(out, content);
  m.add_artifact(out, content);
  m.timings.emplace_back("total", elapsed(t0));
  write_text(manifest_path(out), m.to_json());
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

// "x0,y0,...,side" -> Hypercube.
Hypercube parse_root_cube(const std::vector<double>& v) {
  if (v.size() < 2) throw ValidationError("--root-cube expects corner coordinates followed by the side");
  Hypercube c{std::vector<double>(v.begin(), v.end() - 1), v.back()};
  if (!(c.side > 0.0)) throw ValidationError("--root-cube side must be positive");
  return c;
}

std::vector<std::string> measure_ids(std::size_t n) {
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = "m" + std::to_string(i);
  return ids;
}

struct GenOrbits {
  std::vector<double> classes{2.5, 3.5, 4.0, 4.1, 4.3};
  int per_class = 50;
  int points = 200;
  std::uint64_t seed = 0;
  std::string out;

  int run() const {
    const auto t0 = Clock::now();
    OrbitConfig cfg;
    cfg.class_params = classes;
    cfg.orbits_per_class = per_class;
    cfg.points_per_orbit = points;
    cfg.seed = seed;
    const auto data = generate_orbit_dataset(cfg);
    RunManifest m;
    m.command = "gen-orbits";
    m.seed = seed;
    m.config = {{"classes", join(classes)},
                {"per-class", std::to_string(per_class)},
                {"points", std::to_string(points)},
                {"out", out}};
    write_with_manifest(out, dump_dataset(data) + "\n", m, t0);
    std::cout << "wrote " << data.size() << " clouds to " << out << "\n";
    return kExitOk;
  }
};

struct BuildEnsemble {
  std::string input;
  std::string kind = "quadtree";
  int slices = 10;
  int depth = 6;
  int kappa = 4;
  std::string edge_metric = "euclidean";
  std::uint64_t seed = 0;
  std::vector<double> root_cube;
  int threads = 0;
  std::string out;

  int run() const {
    const auto t0 = Clock::now();
    const auto measures = load_measures(input);
    BuildConfig cfg;
    cfg.deepest_level = depth;
    cfg.kappa = kappa;
    cfg.edge_metric = parse_edge_metric(edge_metric);
    cfg.seed = seed;
    std::optional<Hypercube> cube;
    if (!root_cube.empty()) cube = parse_root_cube(root_cube);
    const auto ens = sample_ensemble(unique_supports(measures), slices, cfg,
                                     parse_tree_kind(kind), seed, resolve_threads(threads), cube);
    RunManifest m;
    m.command = "build-ensemble";
    m.seed = seed;
    m.config = {{"input", input},         {"kind", kind},
                {"slices", std::to_string(slices)}, {"depth", std::to_string(depth)},
                {"kappa", std::to_string(kappa)},   {"edge-metric", edge_metric},
                {"root-cube", join(root_cube)},     {"out", out}};
    write_with_manifest(out, ensemble_to_json(ens) + "\n", m, t0);
    std::cout << "wrote " << ens.n_slices() << " trees over " << ens.points.size()
              << " points to " << out << "\n";
    for (std::size_t s = 0; s < ens.n_slices(); ++s)
      std::cout << "  slice " << s << ": " << ens.trees[s].size() << " nodes, "
                << ens.trees[s].size() - 1 << " edges, depth " << ens.trees[s].max_depth()
                << "\n";
    return kExitOk;
  }
};

struct Distances {
  std::string ensemble;
  std::string measures;
  std::string mode = "tsw";
  std::string pairs = "all";
  std::string ground = "euclidean";
  int directions = 10;
  std::uint64_t seed = 0;
  std::size_t max_entries = kExactOtMaxEntries;
  int threads = 0;
  std::string out;

  int run() const {
    const auto t0 = Clock::now();
    const auto ms = load_measures(measures);
    const std::size_t n = ms.size();
    const int nthreads = resolve_threads(threads);

    std::optional<TreeEnsemble> ens;
    if (mode == "tsw" || (mode == "exact" && ground == "tree")) {
      if (ensemble.empty()) throw ValidationError("--mode " + mode + " needs --ensemble");
      ens = ensemble_from_json(read_text(ensemble));
    }
    std::vector<IndexedMeasure> indexed;
    if (ens) indexed = index_measures(*ens, ms);
    std::vector<TswEmbedding> emb;
    if (mode == "tsw") {
      emb.resize(n);
      parallel_for(n, nthreads, [&](std::size_t i) { emb[i] = embed_measure(*ens, indexed[i]); });
    }
    std::optional<PointSet> dirs;
    if (mode == "sw") {
      if (n == 0) throw ValidationError("no measures");
      Rng rng(derive_seed(seed, "sw-directions"));
      dirs = random_directions(ms[0].dim(), directions, rng);
    }

    auto distance = [&](std::size_t i, std::size_t j) -> double {
      if (i == j) return 0.0;
      if (mode == "tsw") return embedding_distance(emb[i], emb[j]);
      if (mode == "sw") return sliced_wasserstein(ms[i], ms[j], *dirs);
      if (ground == "euclidean")
        return exact_ot(CostMatrix::euclidean(ms[i].supports(), ms[j].supports()),
                        ms[i].weights(), ms[j].weights(), max_entries);
      // Tree ground cost: exact OT per slice on d_T, averaged.
      double total = 0.0;
      for (std::size_t s = 0; s < ens->n_slices(); ++s) {
        std::vector<int> na, nb;
        for (auto p : indexed[i].points) na.push_back(ens->point_to_node[s][p]);
        for (auto p : indexed[j].points) nb.push_back(ens->point_to_node[s][p]);
        total += exact_ot(CostMatrix::tree_metric(ens->trees[s], na, nb), indexed[i].weights,
                          indexed[j].weights, max_entries);
      }
      return total / static_cast<double>(ens->n_slices());
    };

    std::vector<std::pair<std::size_t, std::size_t>> plist;
    const bool all = pairs == "all";
    if (all) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) plist.emplace_back(i, j);
    } else {
      plist = parse_pairs(read_text(pairs));
      for (auto [i, j] : plist)
        if (i >= n || j >= n)
          throw ValidationError("pair (" + std::to_string(i) + ", " + std::to_string(j) +
                                ") out of range for " + std::to_string(n) + " measures");
    }
    std::vector<double> values(plist.size());
    parallel_for(plist.size(), nthreads,
                 [&](std::size_t k) { values[k] = distance(plist[k].first, plist[k].second); });

    std::string content;
    if (all) {
      LabeledMatrix lm{measure_ids(n), std::vector<double>(n * n, 0.0)};
      for (std::size_t k = 0; k < plist.size(); ++k) {
        auto [i, j] = plist[k];
        lm.entries[i * n + j] = lm.entries[j * n + i] = values[k];
      }
      content = matrix_to_csv(lm);
    } else {
      content = pairs_to_csv(plist, values);
    }
    RunManifest m;
    m.command = "distances";
    m.seed = seed;
    m.config = {{"ensemble", ensemble}, {"measures", measures}, {"mode", mode},
                {"pairs", pairs},       {"ground", ground},     {"directions", std::to_string(directions)},
                {"max-entries", std::to_string(max_entries)},   {"out", out}};
    write_with_manifest(out, content, m, t0);
    std::cout << "wrote " << plist.size() << " " << mode << " distances to " << out << "\n";
    return kExitOk;
  }
};

struct Gram {
  std::string dist;
  std::string quantile = "none";
  std::size_t quantile_sample = 0;
  std::uint64_t seed = 0;
  std::string out;

  int run() const {
    const auto t0 = Clock::now();
    LabeledMatrix lm = matrix_from_csv(read_text(dist));
    const GramMatrix d(lm.size(), lm.entries);
    double t = 1.0;
    if (quantile != "none") {
      auto pool = off_diagonal(d);
      if (quantile_sample > 0 && quantile_sample < pool.size()) {
        Rng rng(derive_seed(seed, "gram-quantile"));
        std::vector<double> kept;
        for (std::size_t i = 0; i < quantile_sample; ++i) {
          const auto k = i + uniform_index(rng, pool.size() - i);
          std::swap(pool[i], pool[k]);
          kept.push_back(pool[i]);
        }
        pool = std::move(kept);
      }
      t = bandwidth_from_quantile(pool, std::stod(quantile));
    }
    const GramMatrix k = gram(d, t);
    lm.entries = k.entries();
    RunManifest m;
    m.command = "gram";
    m.seed = seed;
    m.config = {{"dist", dist},
                {"bandwidth-quantile", quantile},
                {"quantile-sample", std::to_string(quantile_sample)},
                {"t", format_double(t)},
                {"out", out}};
    write_with_manifest(out, matrix_to_csv(lm), m, t0);
    std::cout << "t = " << format_double(t) << "; wrote " << lm.size() << "x" << lm.size()
              << " kernel to " << out << "\n";
    return kExitOk;
  }
};

struct Validate {
  std::string suite = "all";
  std::uint64_t seed = 0;
  int trials = 0;
  int threads = 0;
  std::string out;

  int run() const {
    const auto t0 = Clock::now();
    SuiteOptions opt{seed, trials, resolve_threads(threads)};
    const auto results = run_suite(suite, opt);
    bool ok = true;
    nlohmann::ordered_json report = nlohmann::ordered_json::array();
    for (const auto& r : results) {
      std::printf("%s %-8s %s [digest %s, %.2f s]\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                  r.summary.c_str(), r.digest.c_str(), r.seconds);
      if (!r.pass) {
        ok = false;
        std::fprintf(stderr, "counterexample (%s): %s\n", r.name.c_str(),
                     r.counterexample.c_str());
      }
      nlohmann::ordered_json item{{"suite", r.name}, {"pass", r.pass}, {"summary", r.summary},
                                  {"digest", r.digest}};
      if (!r.counterexample.empty())
        item["counterexample"] = nlohmann::ordered_json::parse(r.counterexample);
      report.push_back(std::move(item));
    }
    std::fflush(stdout);
    if (!out.empty()) {
      RunManifest m;
      m.command = "validate";
      m.seed = seed;
      m.config = {{"suite", suite}, {"trials", std::to_string(trials)}, {"out", out}};
      write_with_manifest(out, report.dump(2) + "\n", m, t0);
    }
    return ok ? kExitOk : kExitValidation;
  }
};

std::string choices(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : "|") + x;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree-sliced Wasserstein distances and kernels"};
  app.require_subcommand(1);

  GenOrbits gen;
  auto* g = app.add_subcommand("gen-orbits", "Generate a labeled linked-twist-map orbit dataset");
  g->add_option("--classes", gen.classes, "Flow parameter t per class")->delimiter(',');
  g->add_option("--per-class", gen.per_class, "Orbits per class")->check(CLI::PositiveNumber);
  g->add_option("--points", gen.points, "Points per orbit")->check(CLI::PositiveNumber);
  g->add_option("--seed", gen.seed, "Master seed");
  g->add_option("--out", gen.out, "Output JSON path")->required();

  BuildEnsemble be;
  auto* b = app.add_subcommand("build-ensemble", "Sample n_s trees over the supports of a measure file");
  b->add_option("--input", be.input, "Measures or dataset JSON")->required();
  b->add_option("--kind", be.kind, "Tree construction")
      ->check(CLI::IsMember({"quadtree", "partition", "cluster"}));
  b->add_option("--slices", be.slices, "Number of trees n_s")->check(CLI::PositiveNumber);
  b->add_option("--depth", be.depth, "Deepest level H_T")->check(CLI::PositiveNumber);
  b->add_option("--kappa", be.kappa, "Clusters per split (cluster kind)")->check(CLI::PositiveNumber);
  b->add_option("--edge-metric", be.edge_metric, "Edge lengths")
      ->check(CLI::IsMember({"euclidean", "l1"}));
  b->add_option("--seed", be.seed, "Master seed");
  b->add_option("--root-cube", be.root_cube, "Fixed root cube x0,...,x_{d-1},side (quadtree only)")
      ->delimiter(',');
  b->add_option("--threads", be.threads, "Worker threads (default $TSW_THREADS or 1)");
  b->add_option("--out", be.out, "Output ensemble JSON")->required();

  Distances ds;
  auto* d = app.add_subcommand("distances", "Pairwise distances between measures");
  d->add_option("--ensemble", ds.ensemble, "Ensemble JSON (tsw, exact with --ground tree)");
  d->add_option("--measures", ds.measures, "Measures or dataset JSON")->required();
  d->add_option("--mode", ds.mode, "Distance")->check(CLI::IsMember({"tsw", "sw", "exact"}));
  d->add_option("--pairs", ds.pairs, "'all' or a file of 'i j' lines");
  d->add_option("--ground", ds.ground, "Ground cost for --mode exact")
      ->check(CLI::IsMember({"euclidean", "tree"}));
  d->add_option("--directions", ds.directions, "Random directions for --mode sw")
      ->check(CLI::PositiveNumber);
  d->add_option("--seed", ds.seed, "Seed for sw directions");
  d->add_option("--max-entries", ds.max_entries, "Size guard for exact OT (cost entries)");
  d->add_option("--threads", ds.threads, "Worker threads (default $TSW_THREADS or 1)");
  d->add_option("--out", ds.out, "Output CSV")->required();

  Gram gr;
  auto* k = app.add_subcommand("gram", "Kernel matrix exp(-t D) from a distance CSV");
  k->add_option("--dist", gr.dist, "Distance matrix CSV")->required();
  k->add_option("--bandwidth-quantile", gr.quantile, "1/t = s% quantile of the distances")
      ->check(CLI::IsMember({"none", "10", "20", "50"}));
  k->add_option("--quantile-sample", gr.quantile_sample,
                "Use a random subset of this many distances for the quantile");
  k->add_option("--seed", gr.seed, "Seed for --quantile-sample");
  k->add_option("--out", gr.out, "Output CSV")->required();

  Validate va;
  auto* v = app.add_subcommand("validate", "Run validation suites");
  std::vector<std::string> suites{"all"};
  for (const auto& s : suite_names()) suites.push_back(s);
  v->add_option("--suite", va.suite, choices(suites))->check(CLI::IsMember(suites));
  v->add_option("--seed", va.seed, "Master seed");
  v->add_option("--trials", va.trials, "Trials per suite (0 = suite default)")
      ->check(CLI::NonNegativeNumber);
  v->add_option("--threads", va.threads, "Worker threads (default $TSW_THREADS or 1)");
  v->add_option("--out", va.out, "Optional JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*g) return gen.run();
    if (*b) return be.run();
    if (*d) return ds.run();
    if (*k) return gr.run();
    if (*v) return va.run();
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
