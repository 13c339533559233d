#ifndef THERMOQFI_TWOPOINT_HPP
#define THERMOQFI_TWOPOINT_HPP

#include <tuple>
#include <utility>
#include <vector>

#include "thermoqfi/hilbert.hpp"
#include "thermoqfi/phase_space.hpp"

namespace thermoqfi::twopoint {

using hilbert::Complex;
using hilbert::DensityOperator;
using hilbert::Matrix;

// One system oscillator linearly coupled to a finite set of bath modes,
// full counter-rotating coupling (a^dag + a)(b^dag + b).
struct BathMode {
    double omega;
    double g;
};

struct StarModel {
    double omega0 = 1.0;
    std::vector<BathMode> modes = {{0.8, 0.1}, {1.2, 0.1}};
    double beta = 4.0;  // bath inverse temperature; tail guard binds it to n_bath
    int n_sys = 6;
    int n_bath = 6;
    double t = 5.0;
    Complex alpha0 = 1.0;  // system coherent-thermal initial state
    double nbar0 = 0.5;

    void validate() const;
    int total_dim() const;
};

inline constexpr int kMaxTotalDim = 4096;
inline constexpr double kBathTailGuard = 1e-8;
inline constexpr double kQFloor = 1e-12;

// Assembled operators of one model; the Hamiltonian is diagonalized once so
// states at perturbed bath temperatures are cheap.
class Protocol {
  public:
    explicit Protocol(StarModel model);

    const StarModel& model() const { return model_; }
    const std::vector<int>& dims() const { return dims_; }
    const Matrix& hamiltonian() const { return h_; }
    const Matrix& propagator() const { return u_; }
    const Matrix& bath_hamiltonian() const { return hb_; }

    Matrix chi0(double beta) const;   // rho_0 (x) rho_B(beta)
    Matrix chi_t(double beta) const;  // U chi0 U^dag
    const Matrix& chi0_cached() const { return chi0_beta_; }
    const Matrix& chit_cached() const { return chit_beta_; }
    DensityOperator reduced_state(double beta) const;  // Tr_B chi_t

    double bath_energy_initial() const { return e_b0_; }
    double bath_energy_final() const { return e_bt_; }

  private:
    StarModel model_;
    std::vector<int> dims_;
    Matrix h_, hb_, u_;
    Matrix chi0_beta_, chit_beta_;  // at model.beta
    double e_b0_ = 0.0, e_bt_ = 0.0;
};

// (chi0, chi_t, U) at the model's bath temperature
std::tuple<Matrix, Matrix, Matrix> build_and_evolve(const StarModel& model);

struct ProtocolResult {
    phase_space::GridPtr grid;
    phase_space::ScalarField q;
    phase_space::ScalarField h_tra;
    phase_space::ScalarField h_bac;
    double h_avg = 0.0;
    double e_b0 = 0.0;
    double e_bt = 0.0;
    std::vector<int> masked;  // grid points with Q below the floor
};

// Heat fields of the projective two-point scheme:
//   H_tra = Tr[Pi (U H_B chi0 U^dag - H_B chi_t)]/Q,
//   H_bac = Tr[Pi H_B chi_t]/Q - Tr[H_B chi_t].
ProtocolResult run_protocol(const Protocol& p, phase_space::GridPtr grid);

// Exact score Tr[Pi U H_B chi0 U^dag]/Q - Tr[H_B chi0] over unmasked points.
phase_space::ScalarField score_exact(const Protocol& p, phase_space::GridPtr grid);

// Finite-difference oracle: d ln Q / d(-beta), perturbing only rho_B.
phase_space::ScalarField score_fd(const Protocol& p, phase_space::GridPtr grid,
                                  double dbeta);

// (phase-space QFI, SLD QFI) of the reduced system state.
std::pair<double, double> qfi_cross_check(const Protocol& p, phase_space::GridPtr grid,
                                          double eps_cut = 1e-6, double dbeta = 1e-4);

}  // namespace thermoqfi::twopoint

#endif
