#include "thermoqfi/brownian.hpp"

#include <cmath>

namespace thermoqfi::brownian {

using phase_space::MetricKernel;
using phase_space::PhaseGrid;
using phase_space::RealVector;
using phase_space::ScalarField;

void BrownianParams::validate() const {
    if (!(omega0 > 0.0)) throw Error("BrownianParams: omega0 must be > 0");
    if (!(gamma > 0.0)) throw Error("BrownianParams: gamma must be > 0");
    if (nbar0 < 0.0) throw Error("BrownianParams: nbar0 must be >= 0");
    if (!(nbar_inf > 0.0)) throw Error("BrownianParams: nbar_inf must be > 0");
}

double BrownianParams::beta() const { return std::log(1.0 + 1.0 / nbar_inf) / omega0; }

double BrownianParams::beta0() const {
    if (!(nbar0 > 0.0)) throw Error("BrownianParams: beta0 undefined for nbar0 = 0");
    return std::log(1.0 + 1.0 / nbar0) / omega0;
}

TrajectoryPoint trajectory(const BrownianParams& p, double t) {
    if (t < 0.0) throw Error("trajectory: t must be >= 0");
    double e = std::exp(-p.gamma * t);
    Complex drift = std::exp(Complex(0.0, -p.omega0 * t)) * std::exp(-p.gamma * t / 2.0);
    return {t, p.alpha0 * drift, p.nbar0 * e + p.nbar_inf * (1.0 - e)};
}

double q_function(const BrownianParams& p, double t, Complex alpha_f) {
    TrajectoryPoint tp = trajectory(p, t);
    double s = 1.0 + tp.nbar_t;
    return std::exp(-std::norm(alpha_f - tp.alpha_t) / s) / s;
}

double score(const BrownianParams& p, double t, Complex alpha_f) {
    TrajectoryPoint tp = trajectory(p, t);
    double s = 1.0 + tp.nbar_t;
    double dev = std::norm(alpha_f - tp.alpha_t) - s;
    double e = std::exp(-p.gamma * t);
    return p.omega0 * p.nbar_inf * (1.0 + p.nbar_inf) * (1.0 - e) / (s * s) * dev;
}

double avg_heat(const BrownianParams& p, double t) {
    TrajectoryPoint tp = trajectory(p, t);
    return p.omega0 *
           (tp.nbar_t + std::norm(tp.alpha_t) - p.nbar0 - std::norm(p.alpha0));
}

double traj_heat_dev(const BrownianParams& p, double t, Complex alpha_f) {
    TrajectoryPoint tp = trajectory(p, t);
    double nt = tp.nbar_t, s = 1.0 + nt;
    double e = std::exp(-p.gamma * t);
    double dev = std::norm(alpha_f - tp.alpha_t) - s;
    // (1 - e n0(1+n0)/(nt s)) (nt/s) expanded; regular at nt = 0
    double monopole = (nt / s - e * p.nbar0 * (1.0 + p.nbar0) / (s * s)) * dev;
    double dipole = ((nt - p.nbar0) / s) *
                    2.0 * std::real(std::conj(alpha_f - tp.alpha_t) * tp.alpha_t);
    return p.omega0 * (monopole + dipole);
}

double backaction_heat(const BrownianParams& p, double t, Complex alpha_f) {
    TrajectoryPoint tp = trajectory(p, t);
    double nt = tp.nbar_t, s = 1.0 + nt;
    double dev = std::norm(alpha_f - tp.alpha_t) - s;
    double dipole = 2.0 * std::real(std::conj(alpha_f - tp.alpha_t) * tp.alpha_t);
    return p.omega0 * ((nt - p.nbar0) / s) * (((p.nbar_inf - nt) / s) * dev - dipole);
}

double delta_l2_closed(const BrownianParams& p, double t) {
    TrajectoryPoint tp = trajectory(p, t);
    double nt = tp.nbar_t;
    double e = std::exp(-p.gamma * t);
    double num = p.omega0 * p.omega0 * p.nbar_inf * p.nbar_inf * (1.0 + p.nbar_inf) *
                 (1.0 + p.nbar_inf) * (1.0 - e) * (1.0 - e);
    if (nt <= 0.0) return 0.0;
    return num / (nt * (1.0 + nt));
}

double dhs2(const BrownianParams& p) {
    return p.omega0 * p.omega0 * p.nbar_inf * (1.0 + p.nbar_inf);
}

int fock_dim_at(const BrownianParams& p, double t) {
    TrajectoryPoint tp = trajectory(p, t);
    int dim = 0;
    hilbert::displaced_thermal_auto(tp.alpha_t, tp.nbar_t, &dim);
    return dim;
}

DensityOperator state_at(const BrownianParams& p, double t) {
    TrajectoryPoint tp = trajectory(p, t);
    return hilbert::displaced_thermal_auto(tp.alpha_t, tp.nbar_t);
}

CovarianceReport covariance_point(const BrownianParams& p, double t,
                                  const ScanOptions& opts) {
    p.validate();
    TrajectoryPoint tp = trajectory(p, t);
    CovarianceReport rep;
    rep.t = t;
    rep.nbar_t = tp.nbar_t;
    rep.dl2_closed = delta_l2_closed(p, t);
    rep.dhs2 = dhs2(p);

    DensityOperator rho = state_at(p, t);
    phase_space::GridPtr grid = opts.grid.make(tp.alpha_t, tp.nbar_t);
    ScalarField q = phase_space::husimi_q(rho, grid);

    const int n = grid->size();
    RealVector v_sc(n), v_tra(n), v_bac(n);
    const auto& pts = grid->points();
    for (int j = 0; j < n; ++j) {
        v_sc(j) = score(p, t, pts[j]);
        v_tra(j) = traj_heat_dev(p, t, pts[j]);
        v_bac(j) = backaction_heat(p, t, pts[j]);
    }
    ScalarField f_sc(grid, std::move(v_sc));
    ScalarField f_tra(grid, std::move(v_tra));
    ScalarField f_bac(grid, std::move(v_bac));

    phase_space::KernelOptions ko;
    ko.eps_cut = opts.eps_cut;
    MetricKernel kernel = phase_space::t_kernel(rho, grid, ko);
    rep.var_tra = kernel.g_form(q, f_tra, f_tra);
    rep.cov = kernel.g_form(q, f_tra, f_bac);
    rep.var_bac = kernel.g_form(q, f_bac, f_bac);
    rep.dl2_grid = kernel.g_form(q, f_sc, f_sc);
    rep.zero_mean_tra = (grid->weights().array() * q.values().array() *
                         f_tra.values().array()).sum();
    rep.zero_mean_bac = (grid->weights().array() * q.values().array() *
                         f_bac.values().array()).sum();
    return rep;
}

std::vector<CovarianceReport> covariance_scan(const BrownianParams& p,
                                              const std::vector<double>& times,
                                              const ScanOptions& opts) {
    std::vector<CovarianceReport> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(covariance_point(p, t, opts));
    return out;
}

std::vector<double> default_times(const BrownianParams& p, int count, double gt_lo,
                                  double gt_hi) {
    if (count < 2) throw Error("default_times: need >= 2 points");
    std::vector<double> ts(count);
    double llo = std::log(gt_lo), lhi = std::log(gt_hi);
    for (int k = 0; k < count; ++k)
        ts[k] = std::exp(llo + (lhi - llo) * k / double(count - 1)) / p.gamma;
    return ts;
}

}  // namespace thermoqfi::brownian
