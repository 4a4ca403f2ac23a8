// Python bindings for the bdmtsp library.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bdmtsp/cam.hpp"
#include "bdmtsp/harness.hpp"
#include "bdmtsp/io.hpp"
#include "bdmtsp/solvers.hpp"

namespace py = pybind11;
using namespace bdmtsp;

namespace {

RoutingInstance instance_from_points(const std::vector<std::pair<double, double>>& pts, std::string name) {
  std::vector<Point2> coords;
  coords.reserve(pts.size());
  for (auto [x, y] : pts) coords.push_back({x, y});
  return RoutingInstance::from_coords(std::move(name), std::move(coords));
}

py::dict solve_py(const RoutingInstance& inst, std::size_t m, const std::string& scope,
                  const std::string& algorithm, bool closed, std::optional<std::size_t> capacity,
                  std::uint64_t permute_seed) {
  const auto sc = DynamicsScope::parse(scope);
  std::optional<std::vector<NodeIndex>> order;
  if (permute_seed != 0) order = permuted_customers(inst, permute_seed);
  const auto sched = build_schedule(sc, inst, m, order);
  const auto rs = solve(parse_algorithm(algorithm), inst, Fleet(m, capacity), sched, closed);
  py::dict out;
  out["routes"] = rs.routes;
  out["per_route"] = rs.per_route_len;
  out["total"] = rs.total_len;
  out["counts"] = rs.customer_counts();
  out["resolved_da"] = sched.sequential() ? sched.target(0) : -1;
  return out;
}

cam::Model named_model(const std::string& name) {
  if (name == "published_3f") return cam::published_3f();
  if (name == "published_9f") return cam::published_9f();
  if (name == "published_16f") return cam::published_16f();
  throw py::value_error("unknown model: " + name);
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Balanced dynamic multiple travelling salesman heuristics";

  py::register_exception<InfeasibleError>(mod, "InfeasibleError", PyExc_RuntimeError);

  py::class_<RoutingInstance>(mod, "Instance")
      .def_static("from_points", &instance_from_points, py::arg("points"), py::arg("name") = "points",
                  "Instance from (x, y) pairs; the first point is the depot.")
      .def_property_readonly("name", &RoutingInstance::name)
      .def_property_readonly("size", &RoutingInstance::size)
      .def_property_readonly("depot", &RoutingInstance::depot)
      .def("distance", &RoutingInstance::distance)
      .def("__len__", &RoutingInstance::size);

  mod.def("gen_uniform", &gen_uniform, py::arg("n"), py::arg("seed"));
  mod.def("load_tsplib", &load_tsplib, py::arg("path"));
  mod.def(
      "resolve_scope",
      [](const std::string& scope, std::size_t m, std::size_t n) {
        return resolve_scope(DynamicsScope::parse(scope), m, n);
      },
      py::arg("scope"), py::arg("m"), py::arg("n"));
  mod.def("solve", &solve_py, py::arg("instance"), py::arg("m"), py::arg("scope") = "abs:1",
          py::arg("algorithm") = "avh", py::arg("closed") = true, py::arg("capacity") = py::none(),
          py::arg("permute_seed") = 0);
  mod.def(
      "predict",
      [](const std::string& model, double m, double n, double d) {
        return cam::predict(named_model(model), {m, n, d});
      },
      py::arg("model"), py::arg("m"), py::arg("n"), py::arg("d"));
  mod.def(
      "sweep",
      [](const std::vector<std::tuple<double, double, double>>& configs, std::size_t reps, std::uint64_t seed,
         const std::string& algorithm, bool closed, std::size_t threads) {
        SweepSpec spec;
        spec.configs.clear();
        for (auto [m, n, d] : configs) spec.configs.push_back({m, n, d});
        spec.reps = reps;
        spec.seed = seed;
        spec.algorithm = parse_algorithm(algorithm);
        spec.closed = closed;
        spec.threads = threads;
        std::vector<double> means;
        for (const auto& row : run_sweep(spec).rows) means.push_back(row.mean_len);
        return means;
      },
      py::arg("configs"), py::arg("reps") = 10, py::arg("seed") = 1, py::arg("algorithm") = "avh",
      py::arg("closed") = true, py::arg("threads") = 0);
  mod.def(
      "reproduce",
      [](const std::string& table, const std::string& data_dir) {
        const auto r = reproduce_table(table, data_dir);
        return py::make_tuple(r.ok(), format_report(r));
      },
      py::arg("table"), py::arg("data_dir"));
}
