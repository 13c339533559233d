#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "thermoqfi/brownian.hpp"
#include "thermoqfi/estimation.hpp"
#include "thermoqfi/metric_kernel.hpp"
#include "thermoqfi/phase_space.hpp"
#include "thermoqfi/twopoint.hpp"

namespace py = pybind11;
using namespace thermoqfi;
namespace ps = thermoqfi::phase_space;

namespace {

// beta -> displaced thermal family used by the python-facing QFI helpers
ps::StateBuilder displaced_thermal_family(hilbert::Complex alpha, double omega0, int dim) {
    return [alpha, omega0, dim](double beta) {
        return hilbert::displaced_thermal(alpha, 1.0 / std::expm1(beta * omega0), dim);
    };
}

}  // namespace

PYBIND11_MODULE(_thermoqfi, m) {
    m.doc() = "temperature-uncertainty bounds for non-equilibrium open quantum systems";

    py::register_exception<Error>(m, "ThermoQfiError");

    // ---- hilbert substrate
    m.def("ladder", &hilbert::ladder, py::arg("dim"));
    m.def(
        "thermal_state",
        [](double nbar, int dim) { return hilbert::thermal_state(nbar, dim).matrix(); },
        py::arg("nbar"), py::arg("dim"));
    m.def("displacement", &hilbert::displacement, py::arg("alpha"), py::arg("dim"));
    m.def(
        "displaced_thermal",
        [](hilbert::Complex alpha, double nbar) {
            return hilbert::displaced_thermal_auto(alpha, nbar).matrix();
        },
        py::arg("alpha"), py::arg("nbar"));
    m.def("coherent_amplitudes", &hilbert::coherent_amplitudes, py::arg("alpha"),
          py::arg("dim"));

    // ---- brownian closed forms
    py::class_<brownian::BrownianParams>(m, "BrownianParams")
        .def(py::init([](double omega0, double gamma, double nbar0, double nbar_inf,
                         hilbert::Complex alpha0) {
                 brownian::BrownianParams p{omega0, gamma, nbar0, nbar_inf, alpha0};
                 p.validate();
                 return p;
             }),
             py::arg("omega0") = 1.0, py::arg("gamma") = 0.1, py::arg("nbar0") = 1.0,
             py::arg("nbar_inf") = 6.0, py::arg("alpha0") = hilbert::Complex(0.0, 0.0))
        .def_readonly("omega0", &brownian::BrownianParams::omega0)
        .def_readonly("gamma", &brownian::BrownianParams::gamma)
        .def_readonly("nbar0", &brownian::BrownianParams::nbar0)
        .def_readonly("nbar_inf", &brownian::BrownianParams::nbar_inf)
        .def_readonly("alpha0", &brownian::BrownianParams::alpha0)
        .def("beta", &brownian::BrownianParams::beta);

    py::class_<brownian::TrajectoryPoint>(m, "TrajectoryPoint")
        .def_readonly("t", &brownian::TrajectoryPoint::t)
        .def_readonly("alpha_t", &brownian::TrajectoryPoint::alpha_t)
        .def_readonly("nbar_t", &brownian::TrajectoryPoint::nbar_t);

    py::class_<brownian::CovarianceReport>(m, "CovarianceReport")
        .def_readonly("t", &brownian::CovarianceReport::t)
        .def_readonly("nbar_t", &brownian::CovarianceReport::nbar_t)
        .def_readonly("var_tra", &brownian::CovarianceReport::var_tra)
        .def_readonly("cov", &brownian::CovarianceReport::cov)
        .def_readonly("var_bac", &brownian::CovarianceReport::var_bac)
        .def_readonly("dl2_closed", &brownian::CovarianceReport::dl2_closed)
        .def_readonly("dl2_grid", &brownian::CovarianceReport::dl2_grid)
        .def_readonly("dhs2", &brownian::CovarianceReport::dhs2)
        .def_readonly("zero_mean_tra", &brownian::CovarianceReport::zero_mean_tra)
        .def_readonly("zero_mean_bac", &brownian::CovarianceReport::zero_mean_bac);

    m.def("trajectory", &brownian::trajectory, py::arg("params"), py::arg("t"));
    m.def("q_function", &brownian::q_function, py::arg("params"), py::arg("t"),
          py::arg("alpha_f"));
    m.def("score", &brownian::score, py::arg("params"), py::arg("t"), py::arg("alpha_f"));
    m.def("avg_heat", &brownian::avg_heat, py::arg("params"), py::arg("t"));
    m.def("traj_heat_dev", &brownian::traj_heat_dev, py::arg("params"), py::arg("t"),
          py::arg("alpha_f"));
    m.def("backaction_heat", &brownian::backaction_heat, py::arg("params"), py::arg("t"),
          py::arg("alpha_f"));
    m.def("delta_l2_closed", &brownian::delta_l2_closed, py::arg("params"), py::arg("t"));
    m.def("dhs2", &brownian::dhs2, py::arg("params"));
    m.def("default_times", &brownian::default_times, py::arg("params"),
          py::arg("count") = 60, py::arg("gt_lo") = 1e-3, py::arg("gt_hi") = 8.0);
    m.def(
        "covariance_point",
        [](const brownian::BrownianParams& p, double t, double grid_spacing,
           double radius_sigmas, double eps_cut) {
            brownian::ScanOptions opts;
            opts.grid.base_spacing = grid_spacing;
            opts.grid.radius_sigmas = radius_sigmas;
            opts.eps_cut = eps_cut;
            return brownian::covariance_point(p, t, opts);
        },
        py::arg("params"), py::arg("t"), py::arg("grid_spacing") = 0.2,
        py::arg("radius_sigmas") = 4.3, py::arg("eps_cut") = 1e-6,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "covariance_scan",
        [](const brownian::BrownianParams& p, const std::vector<double>& times,
           double grid_spacing, double radius_sigmas, double eps_cut) {
            brownian::ScanOptions opts;
            opts.grid.base_spacing = grid_spacing;
            opts.grid.radius_sigmas = radius_sigmas;
            opts.eps_cut = eps_cut;
            return brownian::covariance_scan(p, times, opts);
        },
        py::arg("params"), py::arg("times"), py::arg("grid_spacing") = 0.2,
        py::arg("radius_sigmas") = 4.3, py::arg("eps_cut") = 1e-6,
        py::call_guard<py::gil_scoped_release>());

    // ---- phase-space QFI against the SLD oracle
    m.def(
        "qfi_displaced_thermal",
        [](hilbert::Complex alpha, double nbar, double omega0, double spacing,
           double extent, double eps_cut) {
            int dim = 0;
            hilbert::displaced_thermal_auto(alpha, nbar, &dim);
            double beta = std::log(1.0 + 1.0 / nbar) / omega0;
            ps::StateBuilder fam = displaced_thermal_family(alpha, omega0, dim);
            if (extent <= 0.0) extent = std::abs(alpha) + 5.0 * std::sqrt(1.0 + nbar);
            ps::GridPtr grid = ps::PhaseGrid::square(alpha, extent, spacing);
            double qfi = ps::qfi_phase_space(fam, beta, grid, eps_cut);
            double sld = ps::sld_qfi(fam, beta);
            return std::make_pair(qfi, sld);
        },
        py::arg("alpha"), py::arg("nbar"), py::arg("omega0") = 1.0,
        py::arg("spacing") = 0.2, py::arg("extent") = 0.0, py::arg("eps_cut") = 1e-6,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "sld_qfi_displaced_thermal",
        [](hilbert::Complex alpha, double nbar, double omega0) {
            int dim = 0;
            hilbert::displaced_thermal_auto(alpha, nbar, &dim);
            double beta = std::log(1.0 + 1.0 / nbar) / omega0;
            return ps::sld_qfi(displaced_thermal_family(alpha, omega0, dim), beta);
        },
        py::arg("alpha"), py::arg("nbar"), py::arg("omega0") = 1.0);

    // ---- estimation
    py::class_<estimation::EstimateReport>(m, "EstimateReport")
        .def_readonly("beta_true", &estimation::EstimateReport::beta_true)
        .def_readonly("beta_hat_mean", &estimation::EstimateReport::beta_hat_mean)
        .def_readonly("var_beta_hat", &estimation::EstimateReport::var_beta_hat)
        .def_readonly("f_classical", &estimation::EstimateReport::f_classical)
        .def_readonly("dl2", &estimation::EstimateReport::dl2)
        .def_readonly("crb_classical", &estimation::EstimateReport::crb_classical)
        .def_readonly("crb_quantum", &estimation::EstimateReport::crb_quantum)
        .def_readonly("rejected_trials", &estimation::EstimateReport::rejected_trials)
        .def_readonly("accepted_trials", &estimation::EstimateReport::accepted_trials)
        .def_readonly("rng_algorithm", &estimation::EstimateReport::rng_algorithm);

    m.def(
        "run_experiment",
        [](const brownian::BrownianParams& params, double t, int nu, int trials,
           uint64_t seed) {
            estimation::ExperimentConfig cfg{params, t, nu, trials, seed};
            return estimation::run_experiment(cfg);
        },
        py::arg("params"), py::arg("t"), py::arg("nu") = 100, py::arg("trials") = 10000,
        py::arg("seed") = 1, py::call_guard<py::gil_scoped_release>());
    m.def(
        "sample_outcomes",
        [](const brownian::BrownianParams& params, double t, int nu, uint64_t seed) {
            estimation::Rng rng(seed);
            return estimation::sample_outcomes(params, t, nu, rng);
        },
        py::arg("params"), py::arg("t"), py::arg("nu"), py::arg("seed"));

    // ---- exact two-point protocol summary
    m.def(
        "twopoint_verify",
        [](double beta, double t, int n_sys, int n_bath) {
            twopoint::StarModel model;
            model.beta = beta;
            model.t = t;
            model.n_sys = n_sys;
            model.n_bath = n_bath;
            twopoint::Protocol protocol(model);
            ps::GridPtr grid = ps::PhaseGrid::square(
                0.0, ps::suggested_half_extent(protocol.reduced_state(beta), 0.0), 0.2);
            twopoint::ProtocolResult res = twopoint::run_protocol(protocol, grid);
            ps::ScalarField sc = twopoint::score_exact(protocol, grid);
            std::vector<char> is_masked(grid->size(), 0);
            for (int j : res.masked) is_masked[j] = 1;
            double worst = 0.0;
            for (int j = 0; j < grid->size(); ++j) {
                if (is_masked[j]) continue;
                double rhs = res.h_tra.values()(j) - res.h_avg + res.h_bac.values()(j);
                worst = std::max(worst, std::abs(sc.values()(j) - rhs));
            }
            py::dict out;
            out["identity_residual"] = worst;
            out["h_avg"] = res.h_avg;
            out["zero_mean_bac"] = (grid->weights().array() * res.q.values().array() *
                                    res.h_bac.values().array()).sum();
            out["masked_points"] = res.masked.size();
            return out;
        },
        py::arg("beta") = 4.0, py::arg("t") = 5.0, py::arg("n_sys") = 6,
        py::arg("n_bath") = 6);
}
