// Python bindings for the core clustering operations.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hiap/ap.hpp"
#include "hiap/hierarchy.hpp"
#include "hiap/rap.hpp"
#include "hiap/stats.hpp"
#include "hiap/synth.hpp"
#include "hiap/wap.hpp"

namespace py = pybind11;
using namespace hiap;

namespace {

Dataset dataset_from_array(py::array_t<double, py::array::c_style |
                                                   py::array::forcecast> pts,
                           py::object weights) {
  if (pts.ndim() != 2) throw input_error("points must be a 2-d array");
  std::size_t n = pts.shape(0), dim = pts.shape(1);
  std::vector<double> coords(pts.data(), pts.data() + n * dim);
  if (weights.is_none()) return Dataset::from_points(dim, std::move(coords));
  auto w = weights.cast<std::vector<double>>();
  return Dataset::from_points(dim, std::move(coords), std::move(w));
}

py::array_t<double> points_to_array(const Dataset& d) {
  py::array_t<double> out({d.size(), d.dim});
  std::copy(d.coords.begin(), d.coords.end(), out.mutable_data());
  return out;
}

SolverConfig solver_config(double q, double damping, int max_iterations) {
  SolverConfig cfg;
  cfg.q = q;
  cfg.damping = damping;
  cfg.max_iterations = max_iterations;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_hiap, m) {
  m.doc() = "Affinity propagation family: AP, SCAP, WAP, Hi-AP, RAP";

  py::class_<ClusteringResult>(m, "ClusteringResult")
      .def_readonly("assignment", &ClusteringResult::assignment)
      .def_readonly("exemplars", &ClusteringResult::exemplars)
      .def_readonly("energy", &ClusteringResult::energy)
      .def_readonly("distortion", &ClusteringResult::distortion)
      .def_readonly("iterations", &ClusteringResult::iterations_run)
      .def_readonly("converged", &ClusteringResult::converged);

  m.def(
      "cluster",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> pts,
         double s, py::object weights, double q, double damping,
         int max_iterations) {
        Dataset data = dataset_from_array(pts, weights);
        SolverConfig cfg = solver_config(q, damping, max_iterations);
        if (data.weights != std::vector<double>(data.size(), 1.0)) {
          auto w = to_weighted(data);
          return solve(build_weighted_similarity(w, s), cfg);
        }
        return solve(build_similarity(data, s), cfg);
      },
      py::arg("points"), py::arg("s"), py::arg("weights") = py::none(),
      py::arg("q") = std::numeric_limits<double>::infinity(),
      py::arg("damping") = 0.5, py::arg("max_iterations") = 1000,
      "Flat AP/SCAP/WAP clustering of a point array");

  m.def(
      "cluster_hierarchical",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> pts,
         std::vector<double> s_schedule, std::size_t cap, int levels,
         std::uint64_t seed, double damping, int max_iterations, int threads) {
        Dataset data = dataset_from_array(pts, py::none());
        SolverConfig cfg = solver_config(
            std::numeric_limits<double>::infinity(), damping, max_iterations);
        HiApPlan p = plan(data.size(), cap, levels);
        HierarchyOptions opts;
        opts.threads = threads;
        auto [res, reports] =
            cluster_hierarchical(data, p, s_schedule, cfg, seed, opts);
        py::list reps;
        for (const auto& r : reports) {
          py::dict d;
          d["level"] = r.level;
          d["clusterings_run"] = r.clusterings_run;
          d["points_in"] = r.points_in;
          d["exemplars_out"] = r.exemplars_out;
          d["operations_estimate"] = r.operations_estimate;
          reps.append(d);
        }
        return py::make_tuple(res, reps);
      },
      py::arg("points"), py::arg("s_schedule"), py::arg("cap"),
      py::arg("levels"), py::arg("seed") = 0, py::arg("damping") = 0.5,
      py::arg("max_iterations") = 1000, py::arg("threads") = 1,
      "Hierarchical divide-and-conquer AP");

  m.def(
      "generate_mixture",
      [](std::size_t n_star, std::size_t dim, std::size_t per_cluster,
         double eta, double variance, const std::string& shape,
         std::uint64_t seed) {
        MixtureSpec spec;
        spec.n_star = n_star;
        spec.dim = dim;
        spec.points_per_cluster = per_cluster;
        spec.shape = shape_from_string(shape);
        spec.variances.assign(n_star, variance);
        if (n_star == 1)
          spec.centers.assign(1, std::vector<double>(dim, 0.0));
        else
          spec.centers = place_centers(n_star, dim, eta, derive_seed(seed, 1),
                                       variance, spec.shape);
        auto [data, truth] = generate(spec, seed);
        return py::make_tuple(points_to_array(data), truth.labels,
                              spec.centers);
      },
      py::arg("n_star"), py::arg("dim"), py::arg("per_cluster"),
      py::arg("eta") = 2.0, py::arg("variance") = 1.0,
      py::arg("shape") = "gaussian", py::arg("seed") = 0,
      "Synthetic mixture; returns (points, labels, centers)");

  m.def(
      "shape_factor",
      [](const std::string& shape, std::size_t dim) {
        return closed_form_shape_factor(shape_from_string(shape), dim).omega;
      },
      py::arg("shape"), py::arg("dim"), "Closed-form shape factor");

  m.def(
      "estimate_shape_factor",
      [](std::vector<std::vector<double>> points) {
        return estimate_shape_factor(points).omega;
      },
      py::arg("points"), "Empirical shape factor");

  m.def(
      "rap_scan",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> pts,
         std::vector<double> s_grid, int levels, std::size_t subset_size,
         double omega_first_level, std::uint64_t seed, int threads) {
        Dataset data = dataset_from_array(pts, py::none());
        RapScanConfig cfg;
        cfg.s_grid = std::move(s_grid);
        cfg.levels = levels;
        cfg.subset_size = subset_size;
        cfg.omega_first_level = {omega_first_level,
                                 ShapeFactor::Source::default_unity};
        cfg.seed = seed;
        cfg.threads = threads;
        auto res = rap_scan(data, cfg);
        py::list rows;
        for (std::size_t si = 0; si < res.s_grid.size(); ++si)
          for (const auto& rec : res.records[si]) {
            py::dict d;
            d["s"] = res.s_grid[si];
            d["level"] = rec.level;
            d["n_clusters"] = rec.cluster_count;
            d["mean_clusters"] = rec.mean_clusters;
            rows.append(d);
          }
        py::dict out;
        out["rows"] = rows;
        out["detected_s_star"] = res.detected_s_star
                                     ? py::object(py::float_(*res.detected_s_star))
                                     : py::object(py::none());
        out["detected_n_star"] = res.detected_n_star
                                     ? py::object(py::int_(*res.detected_n_star))
                                     : py::object(py::none());
        return out;
      },
      py::arg("points"), py::arg("s_grid"), py::arg("levels") = 2,
      py::arg("subset_size") = 300, py::arg("omega_first_level") = 1.0,
      py::arg("seed") = 0, py::arg("threads") = 1,
      "Renormalized penalty scan; returns rows and the detected plateau");
}
