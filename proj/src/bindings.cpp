#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "skewlab/experiment.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw py::value_error(std::string("invalid config JSON: ") + e.what());
    }
}

// Configs and reports cross the boundary as JSON text; the python wrapper
// turns them back into dicts.
std::string run_json(const std::string& config, std::int64_t seed, std::int64_t horizon) {
    skewlab::ExperimentResult r = skewlab::run_experiment(parse(config), seed, horizon);
    if (r.exit_code == skewlab::exit_validation_error) throw py::value_error(r.message);
    if (r.exit_code != skewlab::exit_ok) throw std::domain_error(r.message);
    return r.report.dump();
}

std::string csv_from_report(const std::string& report) {
    return skewlab::report_to_csv(parse(report));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "numerical experiments on skew products over weighted backward shifts";

    m.def("run_json", &run_json, py::arg("config"), py::arg("seed") = -1, py::arg("horizon") = -1,
          "Run one experiment config (JSON text); returns the report as JSON text.");
    m.def("report_to_csv", &csv_from_report, py::arg("report"),
          "Render a JSON report as deterministic CSV.");

    m.def(
        "gamma_quadrature",
        [](double p, double q, std::int64_t panels) {
            skewlab::BaseSystem base = skewlab::BaseSystem::rotation(skewlab::golden_alpha());
            skewlab::ScalarCocycle c(base, skewlab::ScalarCocycle::CosProfile{p, q});
            return skewlab::estimate_gamma(c, skewlab::QuadratureMode{panels});
        },
        py::arg("p"), py::arg("q"), py::arg("panels") = 4096,
        "Mean of log|p + q cos(2 pi a)| by composite midpoint quadrature.");

    m.def(
        "gamma_birkhoff",
        [](double p, double q, double alpha, double a0, std::int64_t horizon) {
            skewlab::BaseSystem base = skewlab::BaseSystem::rotation(alpha);
            skewlab::ScalarCocycle c(base, skewlab::ScalarCocycle::CosProfile{p, q});
            return skewlab::estimate_gamma(
                c, skewlab::BirkhoffMode{skewlab::CirclePoint{skewlab::wrap_unit(a0)}, horizon});
        },
        py::arg("p"), py::arg("q"), py::arg("alpha"), py::arg("a0") = 0.0, py::arg("horizon") = 100000,
        "Birkhoff average of log|h| along a rotation orbit.");

    m.def("branch_index", &skewlab::example1_r, py::arg("k"),
          "r_1 = 1, r_(k+1) = 4 r_k + 3.");

    m.def(
        "log_prefix_product",
        [](const std::string& weights, std::int64_t n) {
            return skewlab::parse_weights(parse(weights)).log_prefix_product(n);
        },
        py::arg("weights"), py::arg("n"),
        "L(n) = sum_(i<=n) log w_i for a weight descriptor (JSON text).");

    m.def(
        "cocycle_sum",
        [](const std::string& base, const std::string& cocycle, std::int64_t n) {
            skewlab::BaseSystem b = skewlab::parse_base(parse(base));
            skewlab::IntegerCocycle c = skewlab::parse_integer_cocycle(b, parse(cocycle));
            return c.sum(b.origin(), n);
        },
        py::arg("base"), py::arg("cocycle"), py::arg("n"),
        "h(n, origin) for an integer cocycle descriptor.");

    m.attr("golden_alpha") = skewlab::golden_alpha();
}
