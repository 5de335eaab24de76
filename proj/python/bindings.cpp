#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tsw/analysis.hpp"
#include "tsw/datagen.hpp"
#include "tsw/error.hpp"
#include "tsw/kernel.hpp"
#include "tsw/measures.hpp"
#include "tsw/transport.hpp"
#include "tsw/tree_build.hpp"
#include "tsw/validation.hpp"

namespace py = pybind11;
using namespace tsw;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

PointSet to_points(const Array& a) {
  if (a.ndim() == 1) {
    // A 1-D array is a cloud of scalars.
    return PointSet(1, std::vector<double>(a.data(), a.data() + a.shape(0)));
  }
  if (a.ndim() != 2) throw ValidationError("points must be a 2-D array (n, d)");
  const auto n = static_cast<std::size_t>(a.shape(0));
  const auto d = static_cast<std::size_t>(a.shape(1));
  return PointSet(d, std::vector<double>(a.data(), a.data() + n * d));
}

Array to_array(const PointSet& p) {
  Array out({p.size(), p.dim()});
  std::copy(p.coords().begin(), p.coords().end(), out.mutable_data());
  return out;
}

Array to_matrix(const std::vector<double>& v, std::size_t n) {
  Array out({n, n});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::vector<double> to_vector(const Array& a) {
  return std::vector<double>(a.data(), a.data() + a.size());
}

DiscreteMeasure to_measure(const Array& points, std::optional<Array> weights) {
  PointSet p = to_points(points);
  if (!weights) return DiscreteMeasure::uniform(std::move(p));
  const auto w = to_vector(*weights);
  return DiscreteMeasure(std::move(p), w);
}

py::dict built_to_dict(const BuiltTree& b) {
  py::dict d;
  d["parent"] = b.tree.parents();
  d["edge_weight"] = b.tree.edge_weights();
  d["root"] = b.tree.root();
  d["depth"] = b.tree.depths();
  d["embedding"] = to_array(b.tree.embeddings());
  d["point_to_node"] = b.point_to_node;
  return d;
}

BuildConfig make_config(int depth, int kappa, const std::string& edge_metric) {
  BuildConfig cfg;
  cfg.deepest_level = depth;
  cfg.kappa = kappa;
  cfg.edge_metric = parse_edge_metric(edge_metric);
  return cfg;
}

// Ensemble plus cached embeddings for repeated queries from Python.
class PyEnsemble {
 public:
  explicit PyEnsemble(TreeEnsemble e) : ens_(std::move(e)) {}

  double tsw(const Array& pa, std::optional<Array> wa, const Array& pb,
             std::optional<Array> wb) const {
    return tree_sliced_wasserstein(ens_, index_measure(ens_, to_measure(pa, wa)),
                                   index_measure(ens_, to_measure(pb, wb)));
  }

  Array matrix(const std::vector<Array>& clouds, std::optional<std::vector<Array>> weights,
               int threads) const {
    std::vector<DiscreteMeasure> ms;
    for (std::size_t i = 0; i < clouds.size(); ++i)
      ms.push_back(to_measure(clouds[i], weights ? std::optional<Array>((*weights)[i])
                                                 : std::nullopt));
    const auto idx = index_measures(ens_, ms);
    std::vector<double> d;
    {
      py::gil_scoped_release release;
      d = tsw_matrix(ens_, idx, threads);
    }
    return to_matrix(d, ms.size());
  }

  std::size_t n_slices() const { return ens_.n_slices(); }
  Array points() const { return to_array(ens_.points); }
  std::string to_json() const { return ensemble_to_json(ens_); }
  py::dict tree(std::size_t s) const {
    if (s >= ens_.n_slices()) throw py::index_error("slice out of range");
    return built_to_dict({ens_.trees[s], ens_.point_to_node[s], std::nullopt, {}});
  }

 private:
  TreeEnsemble ens_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tree-sliced Wasserstein distances, kernels and validation helpers";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def(
      "tree_wasserstein",
      [](std::vector<int> parent, std::vector<double> weight, int root, std::vector<double> mu,
         std::vector<double> nu) {
        const RootedTree t(std::move(parent), std::move(weight), root);
        return tree_wasserstein(t, NodeMeasure(t, std::move(mu)), NodeMeasure(t, std::move(nu)));
      },
      py::arg("parent"), py::arg("edge_weight"), py::arg("root"), py::arg("mu"), py::arg("nu"),
      "Closed-form W1 under a tree metric; parent[root] must be -1.");

  m.def(
      "project_diagonal",
      [](double birth, double death) {
        const DiagramPoint q = project_diagonal({birth, death});
        return py::make_tuple(q.birth, q.death);
      },
      py::arg("birth"), py::arg("death"));
  m.def(
      "augment_pair",
      [](const Array& a, const Array& b) {
        auto diagram = [](const Array& x) {
          const PointSet p = to_points(x);
          if (!p.empty() && p.dim() != 2) throw ValidationError("diagram must have shape (n, 2)");
          std::vector<DiagramPoint> pts;
          for (std::size_t i = 0; i < p.size(); ++i) pts.push_back({p[i][0], p[i][1]});
          return PersistenceDiagram(std::move(pts));
        };
        auto [ma, mb] = augment_pair(diagram(a), diagram(b));
        return py::make_tuple(to_array(ma.supports()), to_array(mb.supports()));
      },
      py::arg("a"), py::arg("b"),
      "Supports of the two uniform measures comparing diagrams a and b (arrays of (birth, death)).");

  m.def(
      "build_partition_tree",
      [](const Array& pts, int depth, std::uint64_t seed, const std::string& edge_metric,
         std::optional<std::vector<double>> root_cube) {
        const PointSet p = to_points(pts);
        const BuildConfig cfg = make_config(depth, 4, edge_metric);
        if (root_cube) {
          if (root_cube->size() != p.dim() + 1)
            throw ValidationError("root_cube must hold d corner coordinates and the side");
          Hypercube c{std::vector<double>(root_cube->begin(), root_cube->end() - 1),
                      root_cube->back()};
          return built_to_dict(build_partition_tree(p, c, cfg));
        }
        Rng rng(seed);
        return built_to_dict(build_partition_tree(p, cfg, rng));
      },
      py::arg("points"), py::arg("depth") = 6, py::arg("seed") = 0,
      py::arg("edge_metric") = "euclidean", py::arg("root_cube") = py::none());

  m.def(
      "build_clustering_tree",
      [](const Array& pts, int depth, int kappa, std::uint64_t seed,
         const std::string& edge_metric) {
        Rng rng(seed);
        return built_to_dict(
            build_clustering_tree(to_points(pts), make_config(depth, kappa, edge_metric), rng));
      },
      py::arg("points"), py::arg("depth") = 6, py::arg("kappa") = 4, py::arg("seed") = 0,
      py::arg("edge_metric") = "euclidean");

  m.def(
      "farthest_point_clustering",
      [](const Array& pts, int kappa, std::size_t first_center) {
        const Clustering c = farthest_point_clustering(to_points(pts), kappa, first_center);
        return py::make_tuple(c.centers, c.assignment, c.radius);
      },
      py::arg("points"), py::arg("kappa"), py::arg("first_center") = 0,
      "Returns (centers, assignment, radius).");

  py::class_<PyEnsemble>(m, "Ensemble")
      .def_property_readonly("n_slices", &PyEnsemble::n_slices)
      .def_property_readonly("points", &PyEnsemble::points)
      .def("tsw", &PyEnsemble::tsw, py::arg("a"), py::arg("weights_a") = py::none(),
           py::arg("b"), py::arg("weights_b") = py::none())
      .def("matrix", &PyEnsemble::matrix, py::arg("clouds"), py::arg("weights") = py::none(),
           py::arg("threads") = 1)
      .def("tree", &PyEnsemble::tree, py::arg("slice"))
      .def("to_json", &PyEnsemble::to_json);

  m.def(
      "sample_ensemble",
      [](const std::vector<Array>& clouds, int n_slices, const std::string& kind, int depth,
         int kappa, const std::string& edge_metric, std::uint64_t seed, int threads) {
        std::vector<DiscreteMeasure> ms;
        for (const auto& c : clouds) ms.push_back(DiscreteMeasure::uniform(to_points(c)));
        return PyEnsemble(sample_ensemble(unique_supports(ms), n_slices,
                                          make_config(depth, kappa, edge_metric),
                                          parse_tree_kind(kind), seed, threads));
      },
      py::arg("clouds"), py::arg("n_slices") = 10, py::arg("kind") = "quadtree",
      py::arg("depth") = 6, py::arg("kappa") = 4, py::arg("edge_metric") = "euclidean",
      py::arg("seed") = 0, py::arg("threads") = 1,
      "Trees over the union of the supports of all clouds.");
  m.def(
      "load_ensemble", [](const std::string& text) { return PyEnsemble(ensemble_from_json(text)); },
      py::arg("json_text"));

  m.def(
      "exact_ot",
      [](const Array& cost, const Array& mu, const Array& nu, std::size_t max_entries) {
        if (cost.ndim() != 2) throw ValidationError("cost must be a 2-D array");
        const CostMatrix c(cost.shape(0), cost.shape(1), to_vector(cost));
        return exact_ot(c, to_vector(mu), to_vector(nu), max_entries);
      },
      py::arg("cost"), py::arg("mu"), py::arg("nu"), py::arg("max_entries") = kExactOtMaxEntries);

  m.def(
      "optimal_assignment",
      [](const Array& a, const Array& b, double exponent) {
        const auto r = optimal_assignment({to_points(a), to_points(b), exponent});
        return py::make_tuple(r.value, r.permutation);
      },
      py::arg("a"), py::arg("b"), py::arg("exponent") = 2.0,
      "Returns (value, permutation) with value = (min mean ||a_i - b_s(i)||^p)^(1/p).");

  m.def(
      "sliced_wasserstein",
      [](const Array& a, const Array& b, int n_dirs, std::uint64_t seed) {
        Rng rng(seed);
        return sliced_wasserstein_1d(to_points(a), to_points(b), n_dirs, rng);
      },
      py::arg("a"), py::arg("b"), py::arg("n_directions") = 10, py::arg("seed") = 0);

  m.def("tsw_kernel", &tsw_kernel, py::arg("tsw_value"), py::arg("t"));
  m.def(
      "bandwidth_from_quantile",
      [](std::vector<double> d, std::optional<double> s) { return bandwidth_from_quantile(d, s); },
      py::arg("distances"), py::arg("s") = py::none());
  m.def(
      "gram",
      [](const Array& d, double t) {
        const GramMatrix g(d.shape(0), to_vector(d));
        return to_matrix(gram(g, t).entries(), g.size());
      },
      py::arg("distances"), py::arg("t"));
  m.def(
      "check_negative_definite",
      [](const Array& d, int trials, std::uint64_t seed) {
        Rng rng(seed);
        const auto r = check_negative_definite(GramMatrix(d.shape(0), to_vector(d)), trials, rng);
        py::dict out;
        out["max_quadratic_form"] = r.max_quadratic_form;
        out["min_centered_eigenvalue"] = r.min_centered_eigenvalue;
        out["pass"] = r.pass();
        return out;
      },
      py::arg("distances"), py::arg("trials") = 100, py::arg("seed") = 0);

  m.def(
      "check_w2_bound",
      [](const Array& a, const Array& b, std::uint64_t seed) {
        Rng rng(seed);
        const auto r = check_w2_bound(to_points(a), to_points(b), 1, rng);
        py::dict out;
        out["depth"] = r.depth;
        out["beta"] = r.beta;
        out["w1"] = r.w1;
        out["w2"] = r.w2;
        out["tw"] = r.tw;
        out["tw_geometric"] = r.tw_geometric;
        out["rhs"] = r.rhs;
        out["holds"] = r.holds;
        out["identity_holds"] = r.identity_holds;
        out["unmatched"] = r.unmatched_cells;
        return out;
      },
      py::arg("a"), py::arg("b"), py::arg("seed") = 0);

  m.def(
      "generate_orbit",
      [](double t, double a0, double b0, std::size_t n) { return to_array(generate_orbit(t, a0, b0, n)); },
      py::arg("t"), py::arg("a0"), py::arg("b0"), py::arg("n"));
  m.def(
      "generate_orbit_dataset",
      [](std::vector<double> params, int per_class, int points, std::uint64_t seed) {
        OrbitConfig cfg;
        cfg.class_params = std::move(params);
        cfg.orbits_per_class = per_class;
        cfg.points_per_orbit = points;
        cfg.seed = seed;
        py::list clouds;
        std::vector<int> labels;
        for (const auto& c : generate_orbit_dataset(cfg)) {
          clouds.append(to_array(c.points));
          labels.push_back(c.label);
        }
        return py::make_tuple(clouds, labels);
      },
      py::arg("class_params") = std::vector<double>{2.5, 3.5, 4.0, 4.1, 4.3},
      py::arg("per_class") = 50, py::arg("points") = 200, py::arg("seed") = 0,
      "Returns (clouds, labels).");

  m.def(
      "run_suite",
      [](const std::string& name, std::uint64_t seed, int trials) {
        std::vector<SuiteResult> rs;
        {
          py::gil_scoped_release release;
          rs = run_suite(name, {seed, trials, 1});
        }
        py::list out;
        for (const auto& r : rs) {
          py::dict d;
          d["name"] = r.name;
          d["pass"] = r.pass;
          d["summary"] = r.summary;
          d["digest"] = r.digest;
          d["counterexample"] = r.counterexample;
          out.append(d);
        }
        return out;
      },
      py::arg("name"), py::arg("seed") = 0, py::arg("trials") = 0);
}
