#ifndef THERMOQFI_HILBERT_HPP
#define THERMOQFI_HILBERT_HPP

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "thermoqfi/errors.hpp"

namespace thermoqfi::hilbert {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Tolerances used by every structural check in this module.
inline constexpr double kTolHermitian = 1e-10;   // max |A - A^dag| elementwise
inline constexpr double kTolTrace = 1e-10;       // |Tr rho - 1|
inline constexpr double kTolPositivity = 1e-10;  // min eigenvalue >= -kTolPositivity
inline constexpr double kTolUnitary = 1e-9;      // ||U^dag U - I||_max
inline constexpr double kTolQuadrature = 1e-6;   // completeness quadrature, per entry
inline constexpr double kThermalTailGuard = 1e-12;

// Square complex matrix on a truncated Fock (or composite) space.
class DenseOperator {
  public:
    explicit DenseOperator(Matrix m);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Matrix& matrix() const { return mat_; }

    bool is_hermitian(double tol = kTolHermitian) const;
    double max_nonhermiticity() const;

  private:
    Matrix mat_;
};

// DenseOperator validated as a density matrix: Hermitian, unit trace,
// positive semidefinite (all within the module tolerances).
class DensityOperator {
  public:
    explicit DensityOperator(Matrix m);

    int dim() const { return op_.dim(); }
    const Matrix& matrix() const { return op_.matrix(); }
    const DenseOperator& op() const { return op_; }

  private:
    DenseOperator op_;
};

class StateVector {
  public:
    StateVector(Vector amplitudes, bool normalized);

    int dim() const { return static_cast<int>(amps_.rows()); }
    const Vector& amplitudes() const { return amps_; }
    bool normalized() const { return normalized_; }
    double norm() const { return amps_.norm(); }

  private:
    Vector amps_;
    bool normalized_;
};

// Annihilation operator a on the truncated space: a|n> = sqrt(n)|n-1>.
Matrix ladder(int dim);

enum class Normalization { Truncated, Unit };

// Coherent amplitudes c_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!), n < dim.
// With Normalization::Unit the vector is rescaled to unit norm.
// Guard: |alpha|^2 <= dim/4 so the truncated tail is negligible.
StateVector coherent_vector(Complex alpha, int dim,
                            Normalization norm = Normalization::Truncated);

// Unguarded truncated coherent amplitudes; used for phase-space projectors
// where arbitrarily remote grid points are legitimate (amplitudes underflow
// to zero there).
Vector coherent_amplitudes(Complex alpha, int dim);

// Thermal state diag p_n = nbar^n/(1+nbar)^{n+1}, renormalized on the
// truncated space.  Guard: geometric tail beyond dim < 1e-12.
DensityOperator thermal_state(double nbar, int dim);

// Smallest dim accepted by the thermal_state tail guard.
int thermal_dim_for(double nbar, double tail = kThermalTailGuard);

// Displacement operator D(alpha) = exp(alpha a^dag - conj(alpha) a),
// computed by scaling-and-squaring on the anti-Hermitian generator.
Matrix displacement(Complex alpha, int dim);

// D(alpha) thermal(nbar) D(alpha)^dag with dim validated against the
// displaced occupation tail.
DensityOperator displaced_thermal(Complex alpha, double nbar, int dim);
int displaced_thermal_dim_for(Complex alpha, double nbar);

// Policy wrapper: starts from displaced_thermal_dim_for and grows the space
// until the occupation-tail guard passes (the guard itself stays hard).
DensityOperator displaced_thermal_auto(Complex alpha, double nbar, int* dim_used = nullptr);

Matrix tensor(std::span<const Matrix> ops);

// Trace out all factors except `keep`; dims lists the factor dimensions in
// tensor order.
Matrix partial_trace(const Matrix& op, std::span<const int> dims, int keep);

// exp(A) by scaling-and-squaring (Pade); used for non-Hermitian generators.
Matrix expm(const Matrix& a);

// Eigendecomposition of a Hermitian operator (values ascending).
std::pair<RealVector, Matrix> eig_hermitian(const Matrix& op,
                                            double tol = kTolHermitian);

// U(t) rho U(t)^dag with U = exp(-i H t) via the Hermitian eigendecomposition.
DensityOperator evolve(const Matrix& hamiltonian, double t, const DensityOperator& state);

// Propagator exp(-i H t) itself.
Matrix propagator(const Matrix& hamiltonian, double t);

inline Complex expectation(const Matrix& observable, const Matrix& rho) {
    return (observable * rho).trace();
}

}  // namespace thermoqfi::hilbert

#endif
