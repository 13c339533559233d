#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "thermoqfi/phase_space.hpp"

using namespace thermoqfi;
using namespace thermoqfi::phase_space;
using hilbert::Complex;
using hilbert::DensityOperator;

namespace {

StateBuilder thermal_family(double omega0, int dim) {
    return [omega0, dim](double beta) {
        return hilbert::thermal_state(1.0 / std::expm1(beta * omega0), dim);
    };
}

StateBuilder displaced_family(Complex alpha, double omega0, int dim) {
    return [alpha, omega0, dim](double beta) {
        return hilbert::displaced_thermal(alpha, 1.0 / std::expm1(beta * omega0), dim);
    };
}

double beta_of(double nbar, double omega0 = 1.0) {
    return std::log(1.0 + 1.0 / nbar) / omega0;
}

}  // namespace

TEST_CASE("husimi q of the vacuum is a unit gaussian") {
    DensityOperator vac = hilbert::thermal_state(0.0, 12);
    GridPtr grid = PhaseGrid::square(0.0, 6.0, 0.25);
    ScalarField q = husimi_q(vac, grid);
    for (int j = 0; j < grid->size(); j += 101) {
        double expected = std::exp(-std::norm(grid->points()[j]));
        CHECK(q.values()(j) == doctest::Approx(expected).epsilon(1e-10));
    }
    CHECK(q.integral() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("husimi q of a thermal state") {
    const double nbar = 1.0;
    DensityOperator th = hilbert::thermal_state(nbar, 45);
    GridPtr grid = PhaseGrid::square(0.0, 7.1, 0.25);
    ScalarField q = husimi_q(th, grid);
    for (int j = 0; j < grid->size(); j += 97) {
        double expected =
            std::exp(-std::norm(grid->points()[j]) / (1.0 + nbar)) / (1.0 + nbar);
        CHECK(q.values()(j) == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("husimi q of a displaced thermal state peaks at the displacement") {
    DensityOperator rho = hilbert::displaced_thermal_auto({3.0, 0.0}, 1.0);
    GridPtr grid = PhaseGrid::square({3.0, 0.0}, 7.1, 0.2);
    ScalarField q = husimi_q(rho, grid);
    int imax = 0;
    q.values().maxCoeff(&imax);
    CHECK(std::abs(grid->points()[imax] - Complex(3.0, 0.0)) < 0.2);
    CHECK(q.values()(imax) == doctest::Approx(0.5).epsilon(2e-3));
}

TEST_CASE("husimi coverage guard raises with a suggested extent") {
    DensityOperator rho = hilbert::displaced_thermal_auto({3.0, 0.0}, 1.0);
    GridPtr small = PhaseGrid::square(0.0, 2.0, 0.2);
    CHECK_THROWS_AS(husimi_q(rho, small), GridCoverageError);
    try {
        husimi_q(rho, small);
    } catch (const GridCoverageError& e) {
        CHECK(e.suggested_extent > 3.0);
        GridPtr ok = PhaseGrid::square(0.0, e.suggested_extent, 0.2);
        CHECK_NOTHROW(husimi_q(rho, ok));
    }
}

TEST_CASE("score field: beta-independent family gives zero") {
    const int dim = 28;
    StateBuilder frozen = [dim](double) { return hilbert::thermal_state(0.5, dim); };
    GridPtr grid = PhaseGrid::square(0.0, 6.0, 0.3);
    ScoreField s = score_field(frozen, 1.0, grid, 1e-4);
    CHECK(s.field.values().cwiseAbs().maxCoeff() < 1e-10);
    CHECK(s.excluded.empty());
}

TEST_CASE("score field matches the analytic gaussian score") {
    const double nbar = 1.0, omega0 = 1.0;
    double beta = beta_of(nbar);
    GridPtr grid = PhaseGrid::square(0.0, 7.1, 0.25);
    ScoreField s = score_field(thermal_family(omega0, 220), beta, grid, 1e-4);
    const double dn = omega0 * nbar * (1.0 + nbar);
    for (int j = 0; j < grid->size(); j += 89) {
        double r2 = std::norm(grid->points()[j]);
        double analytic = dn * (r2 - (1.0 + nbar)) / ((1.0 + nbar) * (1.0 + nbar));
        CHECK(s.field.values()(j) == doctest::Approx(analytic).epsilon(1e-6));
    }
    // zero mean under Q
    DensityOperator rho = hilbert::thermal_state(nbar, 220);
    ScalarField q = husimi_q(rho, grid);
    double mean = (grid->weights().array() * q.values().array() *
                   s.field.values().array()).sum();
    CHECK(std::abs(mean) < 1e-5);
}

TEST_CASE("sld qfi: thermal oscillator equals omega^2 nbar (1+nbar)") {
    const int dim = 45;
    double beta = beta_of(1.0);
    double f = sld_qfi(thermal_family(1.0, dim), beta);
    CHECK(f == doctest::Approx(2.0).epsilon(1e-4));

    // beta-independent pure state
    StateBuilder frozen = [](double) {
        hilbert::Matrix m = hilbert::Matrix::Zero(8, 8);
        m(0, 0) = 1.0;
        return DensityOperator(std::move(m));
    };
    CHECK(sld_qfi(frozen, 1.0) < 1e-12);
}

TEST_CASE("sld qfi is invariant under a beta-independent displacement") {
    const int dim = 60;
    double beta = beta_of(1.0);
    double plain = sld_qfi(thermal_family(1.0, dim), beta);
    double displaced = sld_qfi(displaced_family({3.0, 0.0}, 1.0, 90), beta);
    CHECK(displaced == doctest::Approx(plain).epsilon(1e-6));
}

TEST_CASE("phase-space qfi: beta-independent state gives zero") {
    StateBuilder frozen = [](double) { return hilbert::thermal_state(0.5, 34); };
    GridPtr grid = PhaseGrid::square(0.0, 6.0, 0.3);
    CHECK(std::abs(qfi_phase_space(frozen, 1.0, grid)) < 1e-12);
}

TEST_CASE("phase-space qfi matches the sld oracle for a thermal state") {
    const double nbar = 1.0;
    double beta = beta_of(nbar);
    StateBuilder fam = thermal_family(1.0, 45);
    GridPtr grid = PhaseGrid::square(0.0, 7.1, 0.2);
    double qfi = qfi_phase_space(fam, beta, grid);
    double sld = sld_qfi(fam, beta);
    CHECK(sld == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(std::abs(qfi - sld) / sld < 0.02);
}

TEST_CASE("metric action solve reproduces the paper factor in g_form") {
    // g_form(score, score) = (1+nbar)/nbar * sum w Q L^2 for a thermal state
    const double nbar = 1.0;
    double beta = beta_of(nbar);
    StateBuilder fam = thermal_family(1.0, 45);
    GridPtr grid = PhaseGrid::square(0.0, 7.1, 0.2);
    DensityOperator rho = fam(beta);
    ScalarField q = husimi_q(rho, grid);
    ScoreField s = score_field(fam, beta, grid, default_dbeta(beta));
    MetricKernel k = t_kernel(rho, grid);
    double g = k.g_form(q, s.field, s.field);
    double cl = (grid->weights().array() * q.values().array() *
                 s.field.values().array().square()).sum();
    CHECK(g == doctest::Approx((1.0 + nbar) / nbar * cl).epsilon(1e-3));
}

TEST_CASE("classical limit: g_form approaches the classical fisher information") {
    // hot state: metric becomes diagonal, quantum correction ~ 1/nbar
    const double nbar = 20.0;
    double beta = beta_of(nbar);
    const int dim = hilbert::thermal_dim_for(nbar);
    StateBuilder fam = thermal_family(1.0, dim);
    GridPtr grid = PhaseGrid::square(0.0, 4.5 * std::sqrt(21.0) + 1.0, 0.65);
    DensityOperator rho = fam(beta);
    ScalarField q = husimi_q(rho, grid);
    MetricKernel k = t_kernel(rho, grid);

    // polynomial fields of degree <= 2
    for (int which = 0; which < 3; ++which) {
        RealVector fv(grid->size());
        for (int j = 0; j < grid->size(); ++j) {
            double x = grid->points()[j].real(), y = grid->points()[j].imag();
            fv(j) = which == 0 ? x : (which == 1 ? x * y : x * x + y * y - 21.0);
        }
        ScalarField f(grid, fv);
        double g = k.g_form(q, f, f);
        double cl =
            (grid->weights().array() * q.values().array() * fv.array().square()).sum();
        CHECK(std::abs(g - cl) / cl < 0.05);
    }
}

TEST_CASE("oracle equivalence across moderate displaced-thermal states") {
    // fuller sweep lives in the acceptance suite; one displaced case here
    const double nbar = 0.5;
    double beta = beta_of(nbar);
    Complex alpha(1.5, 0.0);
    int dim = 0;
    hilbert::displaced_thermal_auto(alpha, nbar, &dim);
    StateBuilder fam = displaced_family(alpha, 1.0, dim);
    GridPtr grid = PhaseGrid::square(alpha, std::abs(alpha) + 5.0 * std::sqrt(1.5), 0.2);
    double qfi = qfi_phase_space(fam, beta, grid);
    double sld = sld_qfi(fam, beta);
    CHECK(std::abs(qfi - sld) / sld < 0.02);
}
