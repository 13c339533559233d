#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "thermoqfi/estimation.hpp"
#include "thermoqfi/metric_kernel.hpp"
#include "thermoqfi/phase_space.hpp"

using namespace thermoqfi;
using namespace thermoqfi::phase_space;
using hilbert::Complex;
using hilbert::DensityOperator;

namespace {

DensityOperator thermal(double nbar, int dim) { return hilbert::thermal_state(nbar, dim); }

ScalarField husimi_of(const DensityOperator& rho, GridPtr grid) {
    return husimi_q(rho, grid);
}

}  // namespace

TEST_CASE("vacuum kernel matches the gaussian closed form") {
    // dim must cover the truncated overlaps out to the grid corners
    GridPtr grid = PhaseGrid::square(0.0, 6.0, 0.3);
    DensityOperator vac = thermal(0.0, 140);
    MetricKernel k = t_kernel(vac, grid);

    auto closed = [](Complex a, Complex b) {
        double mod = std::exp(-std::norm(a) - std::norm(b));
        return mod * std::real(std::exp(std::conj(a) * b));
    };
    const auto& pts = grid->points();
    for (int i = 0; i < grid->size(); i += 97)
        for (int j = 0; j < grid->size(); j += 101)
            CHECK(k.entry(i, j) ==
                  doctest::Approx(closed(pts[i], pts[j])).epsilon(1e-9));

    // K(alpha=1, alpha'=0) = e^{-1}
    CHECK(closed(1.0, 0.0) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("kernel diagonal equals Q and symmetry holds") {
    GridPtr grid = PhaseGrid::square(0.0, 6.5, 0.33);
    DensityOperator rho = thermal(1.0, 45);
    KernelOptions opts;
    opts.dense_threshold = 4000;
    MetricKernel k = t_kernel(rho, grid, opts);
    REQUIRE(k.has_dense());
    CHECK(k.symmetry_residual() < 1e-10);
    for (int i = 0; i < grid->size(); i += 53)
        CHECK(k.dense()(i, i) == doctest::Approx(k.q_diag()(i)).epsilon(1e-8));
    CHECK(k.min_weighted_eigenvalue() > -1e-8);
}

TEST_CASE("row-measure identity: kernel rows integrate to Q") {
    GridPtr grid = PhaseGrid::square(0.0, 7.1, 0.25);
    DensityOperator rho = thermal(1.0, 45);
    MetricKernel k = t_kernel(rho, grid);
    CHECK(k.row_measure_residual() < 1e-5);
}

TEST_CASE("constant field identity: g_form(1, f) = sum w Q f") {
    GridPtr grid = PhaseGrid::square(0.0, 7.1, 0.25);
    DensityOperator rho = thermal(1.0, 45);
    ScalarField q = husimi_of(rho, grid);
    MetricKernel k = t_kernel(rho, grid);
    RealVector ones = RealVector::Ones(grid->size());
    RealVector fv(grid->size());
    for (int j = 0; j < grid->size(); ++j) fv(j) = std::norm(grid->points()[j]);
    ScalarField f(grid, fv);
    double lhs = k.g_form(q, ScalarField(grid, ones), f);
    double rhs = (grid->weights().array() * q.values().array() * fv.array()).sum();
    // exact up to quadrature and the cutoff bias on the out-of-range part of f
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-4));
}

TEST_CASE("g_form is symmetric and positive semidefinite on random smooth fields") {
    GridPtr grid = PhaseGrid::square(0.0, 6.0, 0.3);
    DensityOperator rho = thermal(0.7, 40);
    ScalarField q = husimi_of(rho, grid);
    MetricKernel k = t_kernel(rho, grid);

    estimation::Rng rng(12345);
    const int n = grid->size();
    for (int trial = 0; trial < 100; ++trial) {
        // random low-order polynomial field: smooth on the kernel scale
        double c0 = rng.next_gaussian(), c1 = rng.next_gaussian();
        double c2 = rng.next_gaussian(), c3 = rng.next_gaussian();
        double c4 = rng.next_gaussian(), c5 = rng.next_gaussian();
        RealVector f1v(n), f2v(n);
        for (int j = 0; j < n; ++j) {
            double x = grid->points()[j].real(), y = grid->points()[j].imag();
            f1v(j) = c0 + c1 * x + c2 * y + c3 * x * y;
            f2v(j) = c4 + c5 * x * x + c1 * y * y;
        }
        ScalarField f1(grid, f1v), f2(grid, f2v);
        double g11 = k.g_form(q, f1, f1);
        double g12 = k.g_form(q, f1, f2);
        double g21 = k.g_form(q, f2, f1);
        CHECK(g11 >= -1e-10);
        CHECK(g12 == doctest::Approx(g21).epsilon(1e-10));
    }
}

TEST_CASE("pivoted factorization agrees with the dense eigendecomposition") {
    GridPtr grid = PhaseGrid::square(0.0, 6.3, 0.25);  // ~2500 points
    DensityOperator rho = thermal(1.0, 45);
    ScalarField q = husimi_of(rho, grid);

    KernelOptions dense_opts;
    dense_opts.dense_threshold = 1 << 20;
    MetricKernel kd = t_kernel(rho, grid, dense_opts);

    KernelOptions pchol_opts;
    pchol_opts.dense_threshold = 1;
    MetricKernel kp = t_kernel(rho, grid, pchol_opts);
    CHECK(!kp.has_dense());

    RealVector fv(grid->size());
    for (int j = 0; j < grid->size(); ++j) {
        double r2 = std::norm(grid->points()[j]);
        fv(j) = r2 - 2.0;
    }
    ScalarField f(grid, fv);
    double gd = kd.g_form(q, f, f);
    double gp = kp.g_form(q, f, f);
    CHECK(gp == doctest::Approx(gd).epsilon(1e-7));
    CHECK(kp.sigma_max() == doctest::Approx(kd.sigma_max()).epsilon(1e-10));
    CHECK(kp.rank() == kd.rank());
}

TEST_CASE("metric action of the kernel on the thermal score (forward identity)") {
    const double nbar = 1.0;
    GridPtr grid = PhaseGrid::square(0.0, 7.1, 0.2);
    DensityOperator rho = thermal(nbar, 45);
    MetricKernel k = t_kernel(rho, grid);

    const double omega0 = 1.0;
    const double dn = nbar * (1.0 + nbar) * omega0;  // d nbar / d(-beta)
    RealVector score(grid->size());
    for (int j = 0; j < grid->size(); ++j) {
        double r2 = std::norm(grid->points()[j]);
        score(j) = dn * (r2 - (1.0 + nbar)) / ((1.0 + nbar) * (1.0 + nbar));
    }
    // Sum_j w_j K_ij L_j = nbar/(1+nbar) Q_i L_i
    RealVector lhs = k.apply(score);
    RealVector rhs =
        (nbar / (1.0 + nbar)) * (k.q_diag().array() * score.array()).matrix();
    double scale = rhs.cwiseAbs().maxCoeff();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() / scale < 1e-6);
}

TEST_CASE("kernel degenerate error when the cutoff eats the spectrum") {
    GridPtr grid = PhaseGrid::square(0.0, 6.5, 0.4);
    DensityOperator rho = thermal(0.5, 30);
    KernelOptions opts;
    opts.eps_cut = 0.999;
    MetricKernel k = t_kernel(rho, grid, opts);  // construction is fine
    CHECK(k.rank() < 3);
    ScalarField q = husimi_of(rho, grid);
    ScalarField f(grid, RealVector::Ones(grid->size()));
    CHECK_THROWS_AS(k.g_form(q, f, f), KernelDegenerateError);
    CHECK_THROWS_AS(k.solve(q, f), KernelDegenerateError);
}

TEST_CASE("g_form rejects a q field from a different state") {
    GridPtr grid = PhaseGrid::square(0.0, 6.0, 0.4);
    DensityOperator rho = thermal(1.0, 45);
    DensityOperator other = thermal(0.4, 45);
    ScalarField q_other = husimi_of(other, grid);
    MetricKernel k = t_kernel(rho, grid);
    ScalarField f(grid, RealVector::Ones(grid->size()));
    CHECK_THROWS_AS(k.g_form(q_other, f, f), Error);
}

TEST_CASE("SI kernel: pure state gives the product-of-Q form") {
    GridPtr grid = PhaseGrid::square(0.0, 4.5, 0.45);
    const int dim = 24;
    hilbert::StateVector psi =
        hilbert::coherent_vector({0.7, 0.0}, dim, hilbert::Normalization::Unit);
    hilbert::Matrix proj = psi.amplitudes() * psi.amplitudes().adjoint();
    DensityOperator rho{std::move(proj)};

    // rho^lambda = rho for a projector once the eigenvalue dust is snapped to
    // zero, so the integrand is lambda-independent and the reduction exact
    MetricKernel ksi = t_si_kernel(rho, grid, 16);
    // for rho = |psi><psi|: T_SI(a,a') = |<a|psi>|^2 |<a'|psi>|^2 = Q(a) Q(a')
    for (int i = 0; i < grid->size(); i += 41)
        for (int j = 0; j < grid->size(); j += 37)
            CHECK(ksi.entry(i, j) ==
                  doctest::Approx(ksi.q_diag()(i) * ksi.q_diag()(j)).epsilon(1e-6));
}

TEST_CASE("SI kernel is insensitive to the eigenvalue floor on full-rank states") {
    GridPtr grid = PhaseGrid::square(0.0, 4.0, 0.6);
    DensityOperator rho = thermal(0.8, 40);
    KernelOptions lo, hi;
    lo.si_eigenvalue_floor = 1e-18;
    hi.si_eigenvalue_floor = 1e-12;
    MetricKernel ka = t_si_kernel(rho, grid, 16, lo);
    MetricKernel kb = t_si_kernel(rho, grid, 16, hi);
    double worst = 0.0;
    for (int i = 0; i < grid->size(); i += 13)
        for (int j = 0; j < grid->size(); j += 17)
            worst = std::max(worst, std::abs(ka.entry(i, j) - kb.entry(i, j)));
    CHECK(worst < 5e-9);
}

TEST_CASE("SI kernel: maximally mixed state closed form") {
    const int dim = 6;
    GridPtr grid = PhaseGrid::square(0.0, 4.0, 0.5);
    DensityOperator rho{hilbert::Matrix::Identity(dim, dim) / double(dim)};
    MetricKernel ksi = t_si_kernel(rho, grid, 8);
    hilbert::Matrix coh = coherent_matrix(*grid, dim);
    for (int i = 0; i < grid->size(); i += 23)
        for (int j = 0; j < grid->size(); j += 29) {
            double overlap2 = std::norm(coh.col(i).dot(coh.col(j)));
            CHECK(ksi.entry(i, j) == doctest::Approx(overlap2 / dim).epsilon(1e-9));
        }
}

TEST_CASE("SI kernel lambda quadrature is converged at 32 nodes") {
    GridPtr grid = PhaseGrid::square(0.0, 4.2, 0.6);
    DensityOperator rho = thermal(1.0, 41);
    MetricKernel k32 = t_si_kernel(rho, grid, 32);
    MetricKernel k64 = t_si_kernel(rho, grid, 64);
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < grid->size(); i += 7)
        for (int j = 0; j < grid->size(); j += 11) {
            worst = std::max(worst, std::abs(k32.entry(i, j) - k64.entry(i, j)));
            scale = std::max(scale, std::abs(k64.entry(i, j)));
        }
    CHECK(worst / scale < 1e-8);
}

TEST_CASE("SI kernel rejects rank-deficient states when the floor is disabled") {
    GridPtr grid = PhaseGrid::square(0.0, 4.0, 0.5);
    DensityOperator vac = thermal(0.0, 10);
    KernelOptions opts;
    opts.si_eigenvalue_floor = -1.0;
    CHECK_THROWS_AS(t_si_kernel(vac, grid, 8, opts), SingularStateError);
}

TEST_CASE("gauss-legendre nodes integrate polynomials exactly") {
    std::vector<double> x, w;
    gauss_legendre_01(6, x, w);
    double s0 = 0.0, s5 = 0.0;
    for (size_t k = 0; k < x.size(); ++k) {
        s0 += w[k];
        s5 += w[k] * std::pow(x[k], 5);
    }
    CHECK(s0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s5 == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
}
