#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "feesh/config.hpp"
#include "feesh/harness.hpp"
#include "feesh/stats.hpp"
#include "feesh/utility.hpp"

namespace py = pybind11;
using namespace feesh;

namespace {

RunConfig config_from(const py::object& overrides) {
    RunConfig config;
    if (!overrides.is_none()) {
        const auto text = py::module_::import("json").attr("dumps")(overrides).cast<std::string>();
        apply_json(config, nlohmann::json::parse(text));
    }
    config.validate();
    return config;
}

py::object to_python(const std::string& json_text) { return py::module_::import("json").attr("loads")(json_text); }

}  // namespace

PYBIND11_MODULE(_feesh, m) {
    m.doc() = "feesh engine bindings";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("util_fps", &goals::util_fps, py::arg("fps"), py::arg("floor") = 30.0, py::arg("full") = 40.0);
    m.def("util_player_size", &goals::util_player_size, py::arg("ps"), py::arg("w"));
    m.def("util_score", &goals::util_score, py::arg("score"), py::arg("window_start_score"));
    m.def("util_enemy_count", &goals::util_enemy_count, py::arg("alive"), py::arg("target"));
    m.def("util_const_one", &goals::util_const_one);

    py::enum_<stats::Method>(m, "Method")
        .value("Exact", stats::Method::Exact)
        .value("NormalApprox", stats::Method::NormalApprox);

    py::class_<stats::TestResult>(m, "TestResult")
        .def_readonly("u", &stats::TestResult::u)
        .def_readonly("z", &stats::TestResult::z)
        .def_readonly("p", &stats::TestResult::p)
        .def_readonly("method", &stats::TestResult::method)
        .def("__repr__", [](const stats::TestResult& r) {
            return "TestResult(u=" + std::to_string(r.u) + ", p=" + std::to_string(r.p) + ", method=" +
                   std::string(stats::to_string(r.method)) + ")";
        });

    m.def(
        "mann_whitney_u",
        [](const std::vector<double>& a, const std::vector<double>& b, std::optional<stats::Method> method) {
            return method ? stats::mann_whitney_u(a, b, *method) : stats::mann_whitney_u(a, b);
        },
        py::arg("a"), py::arg("b"), py::arg("method") = py::none(),
        "Two-sided rank-sum test; exact for n + m <= 16 unless a method is given.");

    py::class_<stats::Summary>(m, "Summary")
        .def_readonly("n", &stats::Summary::n)
        .def_readonly("mean", &stats::Summary::mean)
        .def_readonly("min", &stats::Summary::min)
        .def_readonly("q1", &stats::Summary::q1)
        .def_readonly("median", &stats::Summary::median)
        .def_readonly("q3", &stats::Summary::q3)
        .def_readonly("max", &stats::Summary::max);
    m.def("describe", [](const std::vector<double>& sample) { return stats::describe(sample); }, py::arg("sample"));

    m.def(
        "frame_cost_ms",
        [](std::uint64_t entities, int vertices, bool collision) {
            return game::frame_cost_ms(game::FrameCostModel{}, entities, vertices, collision);
        },
        py::arg("entities"), py::arg("vertices") = 16, py::arg("collision") = true,
        "Modeled frame cost with the default coefficients.");
    m.def("fps_from_cost", &game::fps_from_cost, py::arg("cost_ms"));

    py::class_<harness::ReplicateResult>(m, "ReplicateResult")
        .def_readonly("seed", &harness::ReplicateResult::seed)
        .def_property_readonly("treatment",
                               [](const harness::ReplicateResult& r) { return std::string(to_string(r.treatment)); })
        .def_readonly("ticks_survived", &harness::ReplicateResult::ticks_survived)
        .def_readonly("mean_util_f", &harness::ReplicateResult::mean_util_f)
        .def_readonly("final_score", &harness::ReplicateResult::final_score)
        .def_property_readonly("outcome",
                               [](const harness::ReplicateResult& r) { return std::string(to_string(r.outcome)); })
        .def_readonly("adaptations", &harness::ReplicateResult::adaptations);

    m.def(
        "run_replicate",
        [](std::uint64_t seed, const std::string& treatment, const py::object& config) {
            const auto cfg = config_from(config);
            const auto t = harness::treatment_from_string(treatment);
            py::gil_scoped_release release;
            return harness::run_replicate(seed, t, cfg);
        },
        py::arg("seed"), py::arg("treatment") = "mapek", py::arg("config") = py::none());

    m.def(
        "run_experiment",
        [](std::size_t replicates, std::uint64_t base_seed, const py::object& config, unsigned jobs) {
            harness::ExperimentOptions opt;
            opt.replicates = replicates;
            opt.base_seed = base_seed;
            opt.jobs = jobs;
            const auto cfg = config_from(config);
            std::string report;
            {
                py::gil_scoped_release release;
                report = harness::render_json(harness::run_experiment(opt, cfg));
            }
            return to_python(report);
        },
        py::arg("replicates") = 50, py::arg("base_seed") = 1, py::arg("config") = py::none(), py::arg("jobs") = 1,
        "Runs both treatments and returns the report as a dict.");
}
