#include "thermoqfi/twopoint.hpp"

#include <cmath>

namespace thermoqfi::twopoint {

using hilbert::Vector;
using phase_space::GridPtr;
using phase_space::RealVector;
using phase_space::ScalarField;

void StarModel::validate() const {
    if (!(omega0 > 0.0)) throw Error("StarModel: omega0 must be > 0");
    if (modes.empty()) throw Error("StarModel: need at least one bath mode");
    if (!(beta > 0.0)) throw Error("StarModel: beta must be > 0");
    if (n_sys < 2 || n_bath < 2) throw InvalidDimensionError("StarModel: dims must be >= 2");
    if (nbar0 < 0.0) throw Error("StarModel: nbar0 must be >= 0");
    if (total_dim() > kMaxTotalDim)
        throw InvalidDimensionError("StarModel: total dim " + std::to_string(total_dim()) +
                                    " exceeds " + std::to_string(kMaxTotalDim));
    for (const BathMode& m : modes) {
        if (!(m.omega > 0.0)) throw Error("StarModel: mode frequency must be > 0");
        double nb = 1.0 / std::expm1(beta * m.omega);
        double tail = std::pow(nb / (1.0 + nb), n_bath);
        if (tail >= kBathTailGuard)
            throw TruncationError("StarModel: bath mode thermal tail " + std::to_string(tail),
                                  hilbert::thermal_dim_for(nb, kBathTailGuard));
    }
}

int StarModel::total_dim() const {
    int d = n_sys;
    for (size_t k = 0; k < modes.size(); ++k) d *= n_bath;
    return d;
}

namespace {

Matrix embed(const Matrix& op, const std::vector<int>& dims, int which) {
    std::vector<Matrix> ops;
    ops.reserve(dims.size());
    for (size_t k = 0; k < dims.size(); ++k) {
        if (static_cast<int>(k) == which)
            ops.push_back(op);
        else
            ops.push_back(Matrix::Identity(dims[k], dims[k]));
    }
    return hilbert::tensor(ops);
}

// Gibbs state of the truncated mode Hamiltonian; the model is defined on its
// truncated space, so no tail guard applies here (StarModel::validate guards
// the bath fidelity separately).
Matrix truncated_gibbs(double nbar, int dim) {
    Matrix rho = Matrix::Zero(dim, dim);
    if (nbar <= 0.0) {
        rho(0, 0) = 1.0;
        return rho;
    }
    double q = nbar / (1.0 + nbar);
    double sum = 0.0;
    for (int n = 0; n < dim; ++n) sum += std::pow(q, n);
    for (int n = 0; n < dim; ++n) rho(n, n) = std::pow(q, n) / sum;
    return rho;
}

Matrix bath_state(const StarModel& m, double beta) {
    std::vector<Matrix> parts;
    parts.reserve(m.modes.size());
    for (const BathMode& mode : m.modes) {
        double nb = 1.0 / std::expm1(beta * mode.omega);
        parts.push_back(truncated_gibbs(nb, m.n_bath));
    }
    return hilbert::tensor(parts);
}

Matrix system_initial(const StarModel& m) {
    Matrix th = truncated_gibbs(m.nbar0, m.n_sys);
    if (m.alpha0 == Complex(0.0, 0.0)) return th;
    Matrix d = hilbert::displacement(m.alpha0, m.n_sys);
    return d * th * d.adjoint();
}

// <alpha| M |alpha> over the grid, M acting on the system factor only
RealVector sandwich(const Matrix& sys_op, const GridPtr& grid) {
    const int n = grid->size();
    const int d = static_cast<int>(sys_op.rows());
    RealVector out(n);
    const auto& pts = grid->points();
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        Vector c = hilbert::coherent_amplitudes(pts[j], d);
        out(j) = c.dot(sys_op * c).real();
    }
    return out;
}

}  // namespace

Protocol::Protocol(StarModel model) : model_(std::move(model)) {
    model_.validate();
    dims_.push_back(model_.n_sys);
    for (size_t k = 0; k < model_.modes.size(); ++k) dims_.push_back(model_.n_bath);

    Matrix as = embed(hilbert::ladder(model_.n_sys), dims_, 0);
    Matrix x_sys = as + as.adjoint();

    const int d = model_.total_dim();
    h_ = model_.omega0 * (as.adjoint() * as);
    hb_ = Matrix::Zero(d, d);
    Matrix coupling = Matrix::Zero(d, d);
    for (size_t k = 0; k < model_.modes.size(); ++k) {
        Matrix bk = embed(hilbert::ladder(model_.n_bath), dims_, static_cast<int>(k) + 1);
        hb_ += model_.modes[k].omega * (bk.adjoint() * bk);
        coupling += model_.modes[k].g * (bk + bk.adjoint());
    }
    h_ += hb_ + x_sys * coupling;

    u_ = hilbert::propagator(h_, model_.t);
    chi0_beta_ = chi0(model_.beta);
    chit_beta_ = u_ * chi0_beta_ * u_.adjoint();
    e_b0_ = (hb_ * chi0_beta_).trace().real();
    e_bt_ = (hb_ * chit_beta_).trace().real();
}

Matrix Protocol::chi0(double beta) const {
    std::vector<Matrix> parts = {system_initial(model_), bath_state(model_, beta)};
    return hilbert::tensor(parts);
}

Matrix Protocol::chi_t(double beta) const { return u_ * chi0(beta) * u_.adjoint(); }

DensityOperator Protocol::reduced_state(double beta) const {
    return DensityOperator(hilbert::partial_trace(chi_t(beta), dims_, 0));
}

std::tuple<Matrix, Matrix, Matrix> build_and_evolve(const StarModel& model) {
    Protocol p(model);
    return {p.chi0(model.beta), p.chit_cached(), p.propagator()};
}

ProtocolResult run_protocol(const Protocol& p, GridPtr grid) {
    const Matrix& u = p.propagator();
    const Matrix& hb = p.bath_hamiltonian();
    Matrix m_flow = hilbert::partial_trace(u * (hb * p.chi0_cached()) * u.adjoint(),
                                           p.dims(), 0);
    Matrix m_now = hilbert::partial_trace(hb * p.chit_cached(), p.dims(), 0);
    Matrix rho_t = hilbert::partial_trace(p.chit_cached(), p.dims(), 0);

    RealVector q = sandwich(rho_t, grid);
    RealVector f_flow = sandwich(m_flow, grid);  // Tr[Pi U H_B chi0 U^dag]
    RealVector f_now = sandwich(m_now, grid);    // Tr[Pi H_B chi_t]

    const int n = grid->size();
    const double e_bt = p.bath_energy_final();
    RealVector h_tra = RealVector::Zero(n), h_bac = RealVector::Zero(n);
    std::vector<int> masked;
    for (int j = 0; j < n; ++j) {
        if (q(j) < kQFloor) {
            masked.push_back(j);
            continue;
        }
        h_tra(j) = (f_flow(j) - f_now(j)) / q(j);
        h_bac(j) = f_now(j) / q(j) - e_bt;
    }
    return ProtocolResult{grid,
                          ScalarField(grid, std::move(q)),
                          ScalarField(grid, std::move(h_tra)),
                          ScalarField(grid, std::move(h_bac)),
                          p.bath_energy_initial() - e_bt,
                          p.bath_energy_initial(),
                          e_bt,
                          std::move(masked)};
}

ScalarField score_exact(const Protocol& p, GridPtr grid) {
    const Matrix& u = p.propagator();
    Matrix m_flow = hilbert::partial_trace(
        u * (p.bath_hamiltonian() * p.chi0_cached()) * u.adjoint(), p.dims(), 0);
    Matrix rho_t = hilbert::partial_trace(p.chit_cached(), p.dims(), 0);
    RealVector q = sandwich(rho_t, grid);
    RealVector f_flow = sandwich(m_flow, grid);
    const int n = grid->size();
    const double e_b0 = p.bath_energy_initial();
    RealVector vals = RealVector::Zero(n);
    for (int j = 0; j < n; ++j)
        if (q(j) >= kQFloor) vals(j) = f_flow(j) / q(j) - e_b0;
    return ScalarField(std::move(grid), std::move(vals));
}

ScalarField score_fd(const Protocol& p, GridPtr grid, double dbeta) {
    if (dbeta <= 0.0) throw Error("score_fd: dbeta must be positive");
    Matrix rp = hilbert::partial_trace(p.chi_t(p.model().beta + dbeta), p.dims(), 0);
    Matrix rm = hilbert::partial_trace(p.chi_t(p.model().beta - dbeta), p.dims(), 0);
    RealVector qp = sandwich(rp, grid);
    RealVector qm = sandwich(rm, grid);
    const int n = grid->size();
    RealVector vals = RealVector::Zero(n);
    for (int j = 0; j < n; ++j)
        if (qp(j) > kQFloor && qm(j) > kQFloor)
            vals(j) = (std::log(qm(j)) - std::log(qp(j))) / (2.0 * dbeta);
    return ScalarField(std::move(grid), std::move(vals));
}

std::pair<double, double> qfi_cross_check(const Protocol& p, GridPtr grid,
                                          double eps_cut, double dbeta) {
    phase_space::StateBuilder builder = [&p](double b) { return p.reduced_state(b); };
    double dl2_phase =
        phase_space::qfi_phase_space(builder, p.model().beta, grid, eps_cut, dbeta);
    double dl2_sld = phase_space::sld_qfi(builder, p.model().beta, dbeta);
    return {dl2_phase, dl2_sld};
}

}  // namespace thermoqfi::twopoint
