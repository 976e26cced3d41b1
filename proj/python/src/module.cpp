#include "s2shock/diagnostics.hpp"
#include "s2shock/equivariant.hpp"
#include "s2shock/error.hpp"
#include "s2shock/geometry.hpp"
#include "s2shock/harness.hpp"
#include "s2shock/profile.hpp"
#include "s2shock/riemann.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace s2shock;
using harness::json;

namespace {

// JSON crosses the boundary as text; the Python package decodes it.
auto parse_config(const std::string& text) -> harness::ExperimentConfig
{
    return harness::from_json(text.empty() ? json::object() : json::parse(text));
}

auto run_in_memory(const std::string& config_text) -> std::string
{
    const auto cfg = parse_config(config_text);
    RunRecord rec;
    {
        py::gil_scoped_release release;
        rec = equivariant::run_until_blowup(cfg.solver, cfg.modulation, cfg.monitor);
    }
    json samples = json::array();
    for (const auto& s : rec.samples) samples.push_back(harness::sample_to_json(s));
    json out;
    out["summary"] = harness::summarize(rec, cfg);
    out["samples"] = samples;
    return out.dump();
}

}  // namespace

PYBIND11_MODULE(_s2shock, m)
{
    m.doc() = "Shock formation for the 2D isentropic Euler equations on the sphere";

    static py::exception<Error> base(m, "S2ShockError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            const std::string msg = std::string(to_string(e.kind())) + ": " + e.what();
            if (e.kind() == ErrorKind::ConfigError)
                PyErr_SetString(PyExc_ValueError, msg.c_str());
            else
                base(msg.c_str());
        }
    });

    m.def("w1d", &profile::w1d, py::arg("y"));
    m.def("w1d_deriv", &profile::w1d_deriv, py::arg("y"), py::arg("order"));
    m.def("w2d", &profile::w2d, py::arg("y1"), py::arg("y2"));
    m.def("w2d_deriv", &profile::w2d_deriv, py::arg("y1"), py::arg("y2"), py::arg("g1"), py::arg("g2"));
    m.def("profile_residual", &profile::selfsimilar_burgers_residual, py::arg("y1"), py::arg("y2"));
    m.def("eta", &profile::eta, py::arg("y1"), py::arg("y2"), py::arg("p"));
    m.def("bound_exponent", &profile::bound_exponent, py::arg("g1"), py::arg("g2"));
    m.def("bound_constant", &profile::bound_constant, py::arg("g1"), py::arg("g2"));

    m.def(
        "betas",
        [](double gamma) {
            const auto b = riemann::betas(gamma);
            return py::dict(py::arg("gamma") = b.gamma, py::arg("alpha") = b.alpha, py::arg("beta1") = b.beta1,
                            py::arg("beta2") = b.beta2, py::arg("beta3") = b.beta3);
        },
        py::arg("gamma"));
    m.def(
        "to_riemann",
        [](double V1, double V2, double S, double lambda) {
            const auto r = riemann::to_riemann({V1, V2, S}, lambda);
            return py::make_tuple(r.w, r.z, r.a);
        },
        py::arg("V1"), py::arg("V2"), py::arg("S"), py::arg("lam"));
    m.def(
        "to_phys",
        [](double w, double z, double a, double lambda) {
            const auto p = riemann::to_phys({w, z, a}, lambda);
            return py::make_tuple(p.V1, p.V2, p.S);
        },
        py::arg("w"), py::arg("z"), py::arg("a"), py::arg("lam"));

    m.def(
        "origin_table",
        [](double psi, double q12, double q13, double q23, double r0, double tol) {
            const auto t = geometry::origin_derivative_table(psi, geometry::skew_from(q12, q13, q23), r0, tol, false);
            py::list entries;
            for (const auto& e : t.entries)
                entries.append(py::dict(py::arg("name") = e.name, py::arg("analytic") = e.analytic,
                                        py::arg("numeric") = e.numeric, py::arg("error") = e.error));
            return py::dict(py::arg("entries") = entries, py::arg("max_error") = t.max_error,
                            py::arg("pass") = t.pass);
        },
        py::arg("psi") = 0.0, py::arg("q12") = 0.0, py::arg("q13") = 0.0, py::arg("q23") = 0.0,
        py::arg("r0") = 1.0, py::arg("tol") = 1e-6);

    m.def("default_config_json", [] { return harness::to_json(harness::ExperimentConfig{}).dump(); });
    m.def(
        "resolve_config_json", [](const std::string& text) { return harness::to_json(parse_config(text)).dump(); },
        py::arg("config"));
    m.def(
        "config_hash", [](const std::string& text) { return harness::config_hash(parse_config(text)); },
        py::arg("config"));
    m.def("run_json", &run_in_memory, py::arg("config"));
    m.def(
        "run_experiment_json",
        [](const std::string& text, const std::string& dir) {
            const auto cfg = parse_config(text);
            harness::RunOutput out;
            {
                py::gil_scoped_release release;
                out = harness::run_experiment(cfg, dir);
            }
            return out.summary.dump();
        },
        py::arg("config"), py::arg("dir"));
    m.def(
        "sweep_json",
        [](const std::string& text, const std::string& dir) {
            const auto cfg = parse_config(text);
            std::vector<harness::SweepRow> rows;
            {
                py::gil_scoped_release release;
                rows = harness::sweep(cfg, dir);
            }
            json out = json::array();
            for (const auto& r : rows)
                out.push_back({{"hash", r.hash},
                               {"gamma", r.gamma},
                               {"tau0", r.tau0},
                               {"xi0", r.xi0},
                               {"n_cells", r.n_cells},
                               {"status", r.status},
                               {"T_star", r.T_star},
                               {"T_minus_tau0", r.T_minus_tau0},
                               {"rate_exponent", r.rate_exponent},
                               {"max_drift", r.max_drift},
                               {"holder_max", r.holder_max},
                               {"min_sigma", r.min_sigma},
                               {"bootstrap_min_margin", r.bootstrap_min_margin},
                               {"all_pass", r.all_pass},
                               {"error", r.error}});
            return out.dump();
        },
        py::arg("config"), py::arg("dir"));
}
