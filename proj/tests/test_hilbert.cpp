#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "thermoqfi/hilbert.hpp"

using namespace thermoqfi;
using namespace thermoqfi::hilbert;

TEST_CASE("ladder operator entries") {
    Matrix a = ladder(4);
    CHECK(a(0, 1).real() == doctest::Approx(1.0));
    CHECK(a(2, 3).real() == doctest::Approx(std::sqrt(3.0)));
    CHECK(a(1, 1) == Complex(0.0, 0.0));
    CHECK_THROWS_AS(ladder(1), InvalidDimensionError);
}

TEST_CASE("commutator [a, a^dag] is identity below the truncation edge") {
    const int dim = 12;
    Matrix a = ladder(dim);
    Matrix comm = a * a.adjoint() - a.adjoint() * a;
    for (int n = 0; n < dim - 1; ++n) CHECK(std::abs(comm(n, n) - 1.0) < 1e-14);
    for (int n = 0; n < dim - 1; ++n)
        for (int m = 0; m < dim - 1; ++m)
            if (n != m) CHECK(std::abs(comm(n, m)) < 1e-14);
}

TEST_CASE("coherent vector amplitudes and guard") {
    StateVector vac = coherent_vector(0.0, 8);
    CHECK(vac.amplitudes()(0).real() == doctest::Approx(1.0));
    CHECK(std::abs(vac.amplitudes()(1)) < 1e-15);

    StateVector c = coherent_vector(1.0, 30);
    CHECK(!c.normalized());
    CHECK((c.amplitudes()(1) / c.amplitudes()(0)).real() == doctest::Approx(1.0));
    // partial exponential sum: sum_{n<30} e^{-1}/n! = 1 to far below 1e-12
    CHECK(std::abs(c.amplitudes().squaredNorm() - 1.0) < 1e-12);

    StateVector u = coherent_vector({0.3, -0.8}, 20, Normalization::Unit);
    CHECK(u.normalized());
    CHECK(u.norm() == doctest::Approx(1.0));

    CHECK_THROWS_AS(coherent_vector(4.0, 16), TruncationError);
    try {
        coherent_vector(4.0, 16);
    } catch (const TruncationError& e) {
        CHECK(e.suggested_dim >= 64);
    }
}

TEST_CASE("thermal state diagonal and mean occupation") {
    DensityOperator vac = thermal_state(0.0, 4);
    CHECK(vac.matrix()(0, 0).real() == doctest::Approx(1.0));

    const int dim = 45;
    DensityOperator th = thermal_state(1.0, dim);
    CHECK(th.matrix()(0, 0).real() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(th.matrix()(1, 1).real() == doctest::Approx(0.25).epsilon(1e-10));
    Matrix a = ladder(dim);
    double nbar = (a.adjoint() * a * th.matrix()).trace().real();
    CHECK(nbar == doctest::Approx(1.0).epsilon(1e-11));

    CHECK_THROWS_AS(thermal_state(1.0, 8), TruncationError);
    CHECK_THROWS_AS(thermal_state(-0.5, 8), Error);
}

TEST_CASE("displacement is unitary and matches coherent amplitudes") {
    const int dim = 40;
    Complex alpha(0.9, -0.4);
    Matrix d = displacement(alpha, dim);
    Matrix defect = d.adjoint() * d - Matrix::Identity(dim, dim);
    CHECK(defect.cwiseAbs().maxCoeff() < 1e-9);

    Vector vac = Vector::Zero(dim);
    vac(0) = 1.0;
    Vector displaced = d * vac;
    Vector analytic = coherent_amplitudes(alpha, dim);
    CHECK((displaced - analytic).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("evolve: identity at t=0, trace and positivity preserved") {
    const int dim = 24;
    Matrix a = ladder(dim);
    Matrix h = a.adjoint() * a + 0.12 * (a + a.adjoint());
    DensityOperator rho = thermal_state(0.35, dim);
    DensityOperator same = evolve(h, 0.0, rho);
    CHECK((same.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-12);

    DensityOperator later = evolve(h, 2.7, rho);  // ctor re-validates invariants
    CHECK(std::abs(later.matrix().trace().real() - 1.0) < 1e-12);

    Matrix u = propagator(h, 2.7);
    Matrix defect = u.adjoint() * u - Matrix::Identity(dim, dim);
    CHECK(defect.cwiseAbs().maxCoeff() < 1e-9);

    Matrix nh = h;
    nh(0, 1) += Complex(0.0, 1e-3);
    CHECK_THROWS_AS(evolve(nh, 1.0, rho), NonHermitianError);
}

TEST_CASE("tensor and partial trace of a product state") {
    DensityOperator ra = thermal_state(0.2, 18);
    DensityOperator rb = thermal_state(0.6, 30);
    std::vector<Matrix> ops = {ra.matrix(), rb.matrix()};
    Matrix prod = tensor(ops);
    CHECK(prod.rows() == 540);
    std::vector<int> dims = {18, 30};
    Matrix back_a = partial_trace(prod, dims, 0);
    Matrix back_b = partial_trace(prod, dims, 1);
    CHECK((back_a - ra.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((back_b - rb.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(partial_trace(prod, dims, 0).trace().real() - 1.0) < 1e-12);

    CHECK_THROWS_AS(partial_trace(prod, std::vector<int>{17, 30}, 0),
                    DimensionMismatchError);
}

TEST_CASE("density operator invariants enforced") {
    Matrix bad = Matrix::Identity(4, 4);  // trace 4
    CHECK_THROWS_AS(DensityOperator{bad}, Error);

    Matrix nonherm = Matrix::Zero(4, 4);
    nonherm(0, 0) = 1.0;
    nonherm(0, 1) = Complex(0.0, 1e-6);
    CHECK_THROWS_AS(DensityOperator{nonherm}, NonHermitianError);

    Matrix negative = Matrix::Zero(4, 4);
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityOperator{negative}, Error);
}

TEST_CASE("truncated coherent completeness via disk quadrature") {
    // e^{-R^2} R^{2 dim}/dim! < 1e-10 at dim=8, R=7
    const int dim = 8;
    const double radius = 7.0, h = 0.2;
    double logtail = -radius * radius + 2.0 * dim * std::log(radius);
    for (int k = 2; k <= dim; ++k) logtail -= std::log(double(k));
    CHECK(std::exp(logtail) < 1e-10);

    Matrix acc = Matrix::Zero(dim, dim);
    int nside = static_cast<int>(std::ceil(2.0 * radius / h));
    double w = h * h / std::numbers::pi;
    for (int iy = 0; iy < nside; ++iy)
        for (int ix = 0; ix < nside; ++ix) {
            Complex alpha(-radius + (ix + 0.5) * h, -radius + (iy + 0.5) * h);
            if (std::abs(alpha) > radius) continue;
            Vector c = coherent_amplitudes(alpha, dim);
            acc += w * (c * c.adjoint());
        }
    Matrix defect = acc - Matrix::Identity(dim, dim);
    CHECK(defect.cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("displaced thermal auto policy keeps the tail guarded") {
    int dim = 0;
    DensityOperator rho = displaced_thermal_auto({3.0, 0.0}, 6.0, &dim);
    CHECK(dim >= thermal_dim_for(6.0));
    int probe = std::max(2, dim / 16);
    double mass = 0.0;
    for (int n = dim - probe; n < dim; ++n) mass += rho.matrix()(n, n).real();
    CHECK(mass < 1e-9);
    // mean occupation nbar + |alpha|^2
    Matrix a = ladder(dim);
    double n = (a.adjoint() * a * rho.matrix()).trace().real();
    CHECK(n == doctest::Approx(15.0).epsilon(1e-6));
}
