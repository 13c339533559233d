#include "thermoqfi/phase_space.hpp"

#include <cmath>
#include <cstdio>

namespace thermoqfi::phase_space {

using hilbert::Complex;
using hilbert::Matrix;

double default_dbeta(double beta) { return 1e-4 * std::abs(beta); }

GridPtr GridPolicy::make(Complex center, double nbar) const {
    double h = base_spacing;
    if (scale_spacing) h = std::max(h, base_spacing * std::sqrt((1.0 + nbar) / 2.0));
    h = std::min(h, max_spacing);
    double half = radius_sigmas * std::sqrt(1.0 + nbar) + margin;
    return PhaseGrid::square(center, half, h);
}

namespace {

struct Moments {
    Complex mean_a;
    double mean_n;
};

Moments state_moments(const DensityOperator& rho) {
    const Matrix& r = rho.matrix();
    const int d = rho.dim();
    Complex a = 0.0;
    double n = 0.0;
    for (int k = 1; k < d; ++k) {
        a += std::sqrt(double(k)) * r(k, k - 1);  // <a> = sum sqrt(k) rho_{k,k-1}
        n += k * r(k, k).real();
    }
    return {a, n};
}

std::string num_str(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

}  // namespace

double suggested_half_extent(const DensityOperator& rho, Complex center) {
    Moments mom = state_moments(rho);
    double central = std::max(mom.mean_n - std::norm(mom.mean_a), 0.0);
    double width2 = 1.0 + central;
    return std::abs(mom.mean_a - center) +
           std::sqrt(width2 * std::log(1.0 / kCoverageTail)) + 1.0;
}

ScalarField husimi_q(const DensityOperator& rho, GridPtr grid) {
    if (!grid) throw Error("husimi_q: null grid");
    Moments mom = state_moments(rho);
    double central = std::max(mom.mean_n - std::norm(mom.mean_a), 0.0);
    double width2 = 1.0 + central;
    Complex offset = mom.mean_a - grid->center();
    double dx = grid->half_extent() - std::abs(offset.real());
    double dy = grid->half_extent() - std::abs(offset.imag());
    double margin = std::min(dx, dy);
    double tail = (margin <= 0.0) ? 1.0 : std::exp(-margin * margin / width2);
    if (tail >= kCoverageTail)
        throw GridCoverageError("husimi_q: state tail mass " + num_str(tail) +
                                    " outside the grid",
                                suggested_half_extent(rho, grid->center()));

    const int n = grid->size();
    Matrix coh = coherent_matrix(*grid, rho.dim());
    Matrix rho_coh = rho.matrix() * coh;
    RealVector q(n);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) q(j) = coh.col(j).dot(rho_coh.col(j)).real();
    if (q.minCoeff() < -1e-12)
        throw Error("husimi_q: negative value " + std::to_string(q.minCoeff()));
    double norm = grid->weights().dot(q);
    if (std::abs(norm - 1.0) > kQNormTolerance)
        throw GridCoverageError("husimi_q: quadrature norm " + std::to_string(norm) +
                                    " outside [1-1e-4, 1+1e-4]",
                                grid->half_extent() * 1.5);
    return ScalarField(std::move(grid), std::move(q));
}

ScoreField score_field(const StateBuilder& builder, double beta, GridPtr grid,
                       double dbeta) {
    if (dbeta <= 0.0) throw Error("score_field: dbeta must be positive");
    ScalarField qp = husimi_q(builder(beta + dbeta), grid);
    ScalarField qm = husimi_q(builder(beta - dbeta), grid);
    const int n = grid->size();
    RealVector values = RealVector::Zero(n);
    std::vector<int> excluded;
    for (int j = 0; j < n; ++j) {
        double p = qp.values()(j), m = qm.values()(j);
        if (p < kUnderflowFloor || m < kUnderflowFloor) {
            excluded.push_back(j);
            continue;
        }
        values(j) = (std::log(m) - std::log(p)) / (2.0 * dbeta);
    }
    return {ScalarField(std::move(grid), std::move(values)), std::move(excluded)};
}

double qfi_phase_space(const StateBuilder& builder, double beta, GridPtr grid,
                       double eps_cut, double dbeta, const KernelOptions& opts) {
    if (dbeta <= 0.0) dbeta = default_dbeta(beta);
    DensityOperator rho = builder(beta);
    ScalarField q = husimi_q(rho, grid);
    ScoreField score = score_field(builder, beta, grid, dbeta);
    KernelOptions o = opts;
    o.eps_cut = eps_cut;
    MetricKernel kernel = t_kernel(rho, grid, o);
    return kernel.g_form(q, score.field, score.field);
}

double sld_qfi(const StateBuilder& builder, double beta, double dbeta, double tau) {
    if (dbeta <= 0.0) dbeta = default_dbeta(beta);
    DensityOperator rho = builder(beta);
    Matrix drho = (builder(beta - dbeta).matrix() - builder(beta + dbeta).matrix()) /
                  (2.0 * dbeta);  // d/d(-beta)
    auto [p, u] = hilbert::eig_hermitian(rho.matrix());
    Matrix m = u.adjoint() * drho * u;
    const int d = rho.dim();
    double f = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double s = p(i) + p(j);
            if (s > tau) f += 2.0 * std::norm(m(i, j)) / s;
        }
    return f;
}

}  // namespace thermoqfi::phase_space
