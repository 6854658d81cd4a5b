#include "vrpsd/checks.hpp"
#include "vrpsd/config.hpp"
#include "vrpsd/generate.hpp"
#include "vrpsd/model.hpp"
#include "vrpsd/recourse.hpp"
#include "vrpsd/solver.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace vrpsd;

namespace {

SolverConfig make_config(const std::string &mode, const std::string &first_stage, const std::string &recourse,
                         const std::string &weights, int b, double time_limit) {
    SolverConfig cfg;
    cfg.mode = parse_mode(mode);
    cfg.first_stage = parse_first_stage(first_stage);
    cfg.recourse = parse_recourse(recourse);
    cfg.weights = parse_weights(weights);
    cfg.b = b;
    cfg.time_limit_s = time_limit;
    cfg.root_phase1_limit_s = std::min(cfg.root_phase1_limit_s, time_limit);
    cfg.validate();
    return cfg;
}

py::dict report_dict(const SolveReport &r) {
    py::dict d;
    d["status"] = r.status;
    d["value"] = r.has_value ? py::object(py::float_(r.value)) : py::none();
    d["exact_value"] = r.has_value ? py::object(py::str(to_string(r.exact_value))) : py::none();
    d["bound"] = r.bound;
    d["gap_pct"] = r.gap_pct;
    d["root_bound"] = r.root_bound;
    d["root_gap_pct"] = r.root_gap_pct;
    d["time_s"] = r.time_s;
    py::list routes;
    for (const auto &rr : r.routes) {
        py::dict route;
        route["sequence"] = rr.route.sequence();
        route["cost"] = rr.cost;
        route["recourse"] = to_string(rr.recourse);
        routes.append(route);
    }
    d["routes"] = routes;
    py::dict cuts;
    cuts["rci"] = r.counts.rci;
    cuts["sri"] = r.counts.sri;
    cuts["proj_sri"] = r.counts.proj_sri;
    cuts["set"] = r.counts.set;
    cuts["partial"] = r.counts.partial;
    d["cuts"] = cuts;
    return d;
}

} // namespace

PYBIND11_MODULE(_vrpsd, m) {
    m.doc() = "Exact VRP with scenario demands";

    py::register_exception<InstanceError>(m, "InstanceError", PyExc_ValueError);

    py::class_<Instance>(m, "Instance")
        .def_readonly("name", &Instance::name)
        .def_readonly("n", &Instance::n)
        .def_readonly("capacity", &Instance::capacity)
        .def_readonly("fleet_size", &Instance::fleet_size)
        .def_readonly("cost", &Instance::cost)
        .def_readonly("demand", &Instance::demand)
        .def_property_readonly("scenarios", &Instance::scenarios)
        .def_property_readonly("prob",
                               [](const Instance &inst) {
                                   std::vector<std::string> out;
                                   for (const auto &p : inst.prob)
                                       out.push_back(to_string(p));
                                   return out;
                               })
        .def("validate", &Instance::validate)
        .def("to_text", &format_instance)
        .def("__repr__", [](const Instance &inst) {
            return "<Instance " + inst.name + " n=" + std::to_string(inst.n) +
                   " scenarios=" + std::to_string(inst.scenarios()) + ">";
        });

    m.def("parse_instance", &parse_instance, py::arg("text"));
    m.def("read_instance", &read_instance, py::arg("path"));
    m.def(
        "generate",
        [](int n, int scenarios, long long capacity, std::uint64_t seed) {
            GenParams gp;
            gp.n = n;
            gp.scenarios = scenarios;
            gp.capacity = capacity;
            gp.seed = seed;
            return generate_instance(gp);
        },
        py::arg("n"), py::arg("scenarios"), py::arg("capacity") = 20, py::arg("seed") = 1);

    m.def(
        "route_recourse",
        [](const Instance &inst, const std::vector<int> &route, const std::string &recourse,
           const std::string &weights, int b) {
            RecourseWeights rw = make_weights(inst, parse_weights(weights), b);
            return to_string(vrpsd::route_recourse(inst, Route{route}, parse_recourse(recourse), rw).total);
        },
        py::arg("instance"), py::arg("route"), py::arg("recourse") = "scenopt", py::arg("weights") = "classical",
        py::arg("b") = 1, "Expected recourse cost of one route as an exact fraction string.");

    m.def(
        "solve",
        [](const Instance &inst, const std::string &mode, const std::string &first_stage,
           const std::string &recourse, const std::string &weights, int b, double time_limit) {
            SolverConfig cfg = make_config(mode, first_stage, recourse, weights, b, time_limit);
            SolveReport r;
            {
                py::gil_scoped_release release;
                r = vrpsd::solve(inst, cfg);
            }
            return report_dict(r);
        },
        py::arg("instance"), py::arg("mode") = "sri", py::arg("first_stage") = "cvrp",
        py::arg("recourse") = "scenopt", py::arg("weights") = "classical", py::arg("b") = 1,
        py::arg("time_limit") = 1800.0);

    m.def(
        "verify",
        [](const std::string &sizes, std::uint64_t seed) {
            std::vector<CheckResult> results;
            {
                py::gil_scoped_release release;
                results = run_battery(battery_sizes(sizes), seed);
            }
            py::list out;
            for (const auto &r : results) {
                py::dict d;
                d["name"] = r.name;
                d["passed"] = r.passed;
                d["cases"] = r.cases;
                d["failures"] = r.failures;
                d["seconds"] = r.seconds;
                d["info"] = r.info;
                d["detail"] = r.detail;
                out.append(d);
            }
            return out;
        },
        py::arg("sizes") = "tiny", py::arg("seed") = 20240101);
}
