#include "slfv/analysis.hpp"
#include "slfv/commands.hpp"
#include "slfv/config.hpp"
#include "slfv/core.hpp"
#include "slfv/pde.hpp"
#include "slfv/sim.hpp"
#include "slfv/wm.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace slfv;

namespace {

ModelParams make_params(double u, double mu, int R, double n_max, int grid_len,
                        const std::string& boundary, const std::string& growth, double kappa) {
    ModelParams p;
    p.u = u;
    p.mu = mu;
    p.R = R;
    p.n_max = n_max;
    p.grid_len = grid_len;
    p.boundary = boundary == "wrap" ? Boundary::wrap : Boundary::clip;
    if (growth == "valley") {
        p.growth.family = GrowthFamily::valley;
    } else if (growth == "logistic_const") {
        p.growth = GrowthSpec::logistic(kappa);
    } else if (growth == "zero") {
        p.growth = GrowthSpec::zero(grid_len);
    } else {
        throw std::invalid_argument("growth must be valley, logistic_const or zero");
    }
    if (p.n_max <= 0.0) p.n_max = suggest_n_max(p);
    return p;
}

} // namespace

PYBIND11_MODULE(_slfvlab, m) {
    m.doc() = "mSLFV simulation and Wright-Malecot prediction core";

    py::class_<ModelParams>(m, "ModelParams")
        .def_readwrite("u", &ModelParams::u)
        .def_readwrite("mu", &ModelParams::mu)
        .def_readwrite("R", &ModelParams::R)
        .def_readwrite("n_max", &ModelParams::n_max)
        .def_readwrite("grid_len", &ModelParams::grid_len)
        .def("ball_volume", &ModelParams::ball_volume);

    m.def("version", []() { return std::string("0.1.0"); });

    m.def("params", &make_params, py::arg("u") = 0.04, py::arg("mu") = 0.0001, py::arg("R") = 4,
          py::arg("n_max") = 0.0, py::arg("grid_len") = 101, py::arg("boundary") = "clip",
          py::arg("growth") = "valley", py::arg("kappa") = 8.0);

    m.def("suggest_n_max", &suggest_n_max);

    m.def(
        "validate_assumptions",
        [](const ModelParams& p) {
            AssumptionReport r = validate_assumptions(p);
            return py::make_tuple(r.ok, r.min_growth, r.max_replacement, r.message);
        },
        "returns (ok, min_growth, max_replacement, message)");

    m.def(
        "steady_state",
        [](const ModelParams& p, double bc_value, double tol) {
            PdeConfig cfg;
            cfg.bc_value = bc_value;
            cfg.tol_steady = tol;
            SteadyResult r = steady_state(p, cfg);
            return py::make_tuple(r.profile, r.converged, r.residual);
        },
        py::arg("params"), py::arg("bc_value") = 8.0, py::arg("tol") = 1e-10,
        "returns (profile, converged, residual)");

    m.def("matrix_exponential", &matrix_exponential, py::arg("A"), py::arg("scale") = 1.0);

    m.def(
        "build_theta",
        [](const std::vector<double>& n, double mu, int t_max, double rate_scale) {
            return build_kernel(n, mu, t_max, rate_scale).theta.theta;
        },
        py::arg("n"), py::arg("mu"), py::arg("t_max") = 28, py::arg("rate_scale") = 1.0);

    m.def("align_prediction", &align_prediction, py::arg("theta"), py::arg("N") = 2.8,
          py::arg("delta") = 1.0);

    m.def(
        "simulate_profile",
        [](const ModelParams& p, double T_end, uint64_t seed, double initial_mass) {
            SimConfig cfg;
            cfg.params = p;
            cfg.T_end = T_end;
            cfg.seed = seed;
            cfg.initial_mass = initial_mass;
            RunResult res = run(cfg);
            return py::make_tuple(res.field.totals(), res.candidates, res.accepted);
        },
        py::arg("params"), py::arg("T_end") = 125.0, py::arg("seed") = 0,
        py::arg("initial_mass") = 3.0, "returns (totals, candidates, accepted)");

    m.def(
        "simulate_identity",
        [](const ModelParams& p, double T_end, uint64_t seed, const std::vector<int>& refs) {
            SimConfig cfg;
            cfg.params = p;
            cfg.T_end = T_end;
            cfg.seed = seed;
            RunResult res = run(cfg);
            std::vector<std::vector<double>> out(refs.size(),
                                                 std::vector<double>(p.grid_len, 0.0));
            for (size_t r = 0; r < refs.size(); ++r)
                for (int x = 0; x < p.grid_len; ++x)
                    out[r][x] = identity_point(res.field, refs[r], x);
            return out;
        },
        py::arg("params"), py::arg("T_end"), py::arg("seed"), py::arg("refs"));

    m.def(
        "qv_formula",
        [](const std::vector<double>& n, const std::vector<double>& phi, const ModelParams& p,
           double N, double delta) { return qv_formula(n, phi, p, p.growth, N, delta); },
        py::arg("n"), py::arg("phi"), py::arg("params"), py::arg("N") = 1.0,
        py::arg("delta") = 1.0);
}
