#ifndef THERMOQFI_BROWNIAN_HPP
#define THERMOQFI_BROWNIAN_HPP

#include <vector>

#include "thermoqfi/hilbert.hpp"
#include "thermoqfi/phase_space.hpp"

namespace thermoqfi::brownian {

using hilbert::Complex;
using hilbert::DensityOperator;

// Markovian damped-oscillator model: drift alpha_t = alpha0 e^{-i w0 t - g t/2},
// diffusion nbar(t) = nbar0 e^{-g t} + nbar_inf (1 - e^{-g t}).
struct BrownianParams {
    double omega0 = 1.0;
    double gamma = 0.1;
    double nbar0 = 1.0;
    double nbar_inf = 6.0;
    Complex alpha0 = 0.0;

    void validate() const;
    double beta() const;   // bath inverse temperature from nbar_inf
    double beta0() const;  // initial system inverse temperature (nbar0 > 0)
};

struct TrajectoryPoint {
    double t;
    Complex alpha_t;
    double nbar_t;
};

TrajectoryPoint trajectory(const BrownianParams& p, double t);

// Q_t(alpha_f) of the coherent thermal state under the Fokker-Planck flow
double q_function(const BrownianParams& p, double t, Complex alpha_f);

// score d ln Q / d(-beta)
double score(const BrownianParams& p, double t, Complex alpha_f);

double avg_heat(const BrownianParams& p, double t);
double traj_heat_dev(const BrownianParams& p, double t, Complex alpha_f);
double backaction_heat(const BrownianParams& p, double t, Complex alpha_f);

// closed-form score fluctuation under the metric
double delta_l2_closed(const BrownianParams& p, double t);

// equilibrium energy fluctuation, the t->infinity limit of delta_l2
double dhs2(const BrownianParams& p);

// The displaced-thermal Fock state at time t, dimension chosen by the
// occupation-tail policy.
DensityOperator state_at(const BrownianParams& p, double t);
int fock_dim_at(const BrownianParams& p, double t);

struct CovarianceReport {
    double t = 0.0;
    double nbar_t = 0.0;
    double var_tra = 0.0;   // <dH_tra^2>_g
    double cov = 0.0;       // <dH_tra H_bac>_g
    double var_bac = 0.0;   // <H_bac^2>_g
    double dl2_closed = 0.0;
    double dl2_grid = 0.0;
    double dhs2 = 0.0;
    double zero_mean_tra = 0.0;  // quadrature Sum w Q dH_tra
    double zero_mean_bac = 0.0;  // quadrature Sum w Q H_bac
};

struct ScanOptions {
    phase_space::GridPolicy grid;
    double eps_cut = 1e-6;
};

// Covariance-matrix entries of (dH_tra, H_bac) under the numeric metric, per
// time point; the state is rebuilt and the grid recentered on alpha_t each
// time.
CovarianceReport covariance_point(const BrownianParams& p, double t,
                                  const ScanOptions& opts = {});
std::vector<CovarianceReport> covariance_scan(const BrownianParams& p,
                                              const std::vector<double>& times,
                                              const ScanOptions& opts = {});

// default time sampling: count log-spaced points on gamma t in [lo, hi]
std::vector<double> default_times(const BrownianParams& p, int count = 60,
                                  double gt_lo = 1e-3, double gt_hi = 8.0);

}  // namespace thermoqfi::brownian

#endif
