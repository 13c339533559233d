#include "thermoqfi/hilbert.hpp"

#include <cmath>

namespace thermoqfi::hilbert {

DenseOperator::DenseOperator(Matrix m) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols())
        throw InvalidDimensionError("DenseOperator: matrix must be square");
    if (mat_.rows() < 2)
        throw InvalidDimensionError("DenseOperator: dim must be >= 2");
    if (!mat_.allFinite())
        throw Error("DenseOperator: entries must be finite");
}

double DenseOperator::max_nonhermiticity() const {
    return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
}

bool DenseOperator::is_hermitian(double tol) const {
    return max_nonhermiticity() < tol;
}

DensityOperator::DensityOperator(Matrix m) : op_(std::move(m)) {
    const Matrix& r = op_.matrix();
    double nh = op_.max_nonhermiticity();
    if (nh >= kTolHermitian)
        throw NonHermitianError("DensityOperator: |A - A^dag| = " + std::to_string(nh) +
                                " exceeds tol " + std::to_string(kTolHermitian));
    double tr = r.trace().real();
    if (std::abs(tr - 1.0) >= kTolTrace)
        throw Error("DensityOperator: trace " + std::to_string(tr) + " not within " +
                    std::to_string(kTolTrace) + " of 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (r + r.adjoint()),
                                             Eigen::EigenvaluesOnly);
    double lmin = es.eigenvalues().minCoeff();
    if (lmin < -kTolPositivity)
        throw Error("DensityOperator: min eigenvalue " + std::to_string(lmin) +
                    " below -" + std::to_string(kTolPositivity));
}

StateVector::StateVector(Vector amplitudes, bool normalized)
    : amps_(std::move(amplitudes)), normalized_(normalized) {
    if (amps_.rows() < 1) throw InvalidDimensionError("StateVector: empty");
    if (!amps_.allFinite()) throw Error("StateVector: amplitudes must be finite");
    if (normalized_ && std::abs(amps_.norm() - 1.0) >= 1e-10)
        throw Error("StateVector: normalized constructor got norm " +
                    std::to_string(amps_.norm()));
}

Matrix ladder(int dim) {
    if (dim < 2) throw InvalidDimensionError("ladder: dim must be >= 2");
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

Vector coherent_amplitudes(Complex alpha, int dim) {
    Vector c = Vector::Zero(dim);
    double a2 = std::norm(alpha);
    if (a2 == 0.0) {
        c(0) = 1.0;
        return c;
    }
    // multiplicative recurrence; remote grid points underflow to zero harmlessly
    Complex term = std::exp(Complex(-a2 / 2.0, 0.0));
    c(0) = term;
    for (int n = 1; n < dim; ++n) {
        term *= alpha / std::sqrt(double(n));
        c(n) = term;
    }
    return c;
}

StateVector coherent_vector(Complex alpha, int dim, Normalization norm) {
    if (dim < 2) throw InvalidDimensionError("coherent_vector: dim must be >= 2");
    double a2 = std::norm(alpha);
    if (a2 > dim / 4.0) {
        int suggested = static_cast<int>(std::ceil(4.0 * a2)) + 1;
        throw TruncationError("coherent_vector: |alpha|^2 = " + std::to_string(a2) +
                                  " exceeds dim/4 truncation guard",
                              suggested);
    }
    Vector c = coherent_amplitudes(alpha, dim);
    if (norm == Normalization::Unit) {
        c /= c.norm();
        return StateVector(std::move(c), true);
    }
    return StateVector(std::move(c), false);
}

int thermal_dim_for(double nbar, double tail) {
    if (nbar <= 0.0) return 2;
    double q = nbar / (1.0 + nbar);
    int d = static_cast<int>(std::ceil(std::log(tail) / std::log(q))) + 1;
    return std::max(d, 2);
}

DensityOperator thermal_state(double nbar, int dim) {
    if (dim < 2) throw InvalidDimensionError("thermal_state: dim must be >= 2");
    if (nbar < 0.0) throw Error("thermal_state: nbar must be >= 0");
    if (nbar > 0.0) {
        double tail = std::pow(nbar / (1.0 + nbar), dim);
        if (tail >= kThermalTailGuard)
            throw TruncationError("thermal_state: geometric tail " + std::to_string(tail) +
                                      " beyond dim violates guard",
                                  thermal_dim_for(nbar));
    }
    Matrix rho = Matrix::Zero(dim, dim);
    if (nbar == 0.0) {
        rho(0, 0) = 1.0;
        return DensityOperator(std::move(rho));
    }
    double lq = std::log(nbar / (1.0 + nbar));
    double sum = 0.0;
    std::vector<double> p(dim);
    for (int n = 0; n < dim; ++n) {
        p[n] = std::exp(n * lq) / (1.0 + nbar);
        sum += p[n];
    }
    for (int n = 0; n < dim; ++n) rho(n, n) = p[n] / sum;
    return DensityOperator(std::move(rho));
}

Matrix expm(const Matrix& a) {
    // Scaling and squaring with a Taylor core; adequate for the bounded
    // generators used here (|alpha| and dim are guarded upstream).
    double nrm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int s = 0;
    if (nrm > 0.5) s = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
    Matrix b = a / std::pow(2.0, s);
    int n = static_cast<int>(a.rows());
    Matrix result = Matrix::Identity(n, n);
    Matrix term = Matrix::Identity(n, n);
    for (int k = 1; k <= 18; ++k) {
        term = (term * b) / double(k);
        result += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18) break;
    }
    for (int k = 0; k < s; ++k) result = result * result;
    return result;
}

Matrix displacement(Complex alpha, int dim) {
    Matrix a = ladder(dim);
    Matrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
    return expm(gen);
}

int displaced_thermal_dim_for(Complex alpha, double nbar) {
    double a2 = std::norm(alpha);
    double mean = nbar + a2;
    double var = nbar * (nbar + 1.0) + a2 * (2.0 * nbar + 1.0);
    int d = static_cast<int>(std::ceil(mean + 6.5 * std::sqrt(var) + 15.0));
    return std::max(d, thermal_dim_for(nbar));
}

DensityOperator displaced_thermal(Complex alpha, double nbar, int dim) {
    DensityOperator th = thermal_state(nbar, dim);
    if (alpha == Complex(0.0, 0.0)) return th;
    Matrix d = displacement(alpha, dim);
    Matrix rho = d * th.matrix() * d.adjoint();
    // occupation tail check: mass in the top levels must be negligible,
    // otherwise the displaced state was clipped by the truncation
    int probe = std::max(2, dim / 16);
    double tailmass = 0.0;
    for (int n = dim - probe; n < dim; ++n) tailmass += rho(n, n).real();
    if (tailmass > 1e-9)
        throw TruncationError("displaced_thermal: top-level mass " + std::to_string(tailmass),
                              displaced_thermal_dim_for(alpha, nbar));
    return DensityOperator(std::move(rho));
}

DensityOperator displaced_thermal_auto(Complex alpha, double nbar, int* dim_used) {
    constexpr int kDimCap = 1500;
    int d = displaced_thermal_dim_for(alpha, nbar);
    while (true) {
        try {
            DensityOperator rho = displaced_thermal(alpha, nbar, d);
            if (dim_used) *dim_used = d;
            return rho;
        } catch (const TruncationError&) {
            if (d >= kDimCap) throw;
            d = std::min(kDimCap, d + d / 4 + 8);
        }
    }
}

Matrix tensor(std::span<const Matrix> ops) {
    if (ops.empty()) throw Error("tensor: empty operator list");
    Matrix out = ops[0];
    for (size_t k = 1; k < ops.size(); ++k) {
        const Matrix& b = ops[k];
        Matrix next(out.rows() * b.rows(), out.cols() * b.cols());
        for (Eigen::Index i = 0; i < out.rows(); ++i)
            for (Eigen::Index j = 0; j < out.cols(); ++j)
                next.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = out(i, j) * b;
        out = std::move(next);
    }
    return out;
}

Matrix partial_trace(const Matrix& op, std::span<const int> dims, int keep) {
    Eigen::Index total = 1;
    for (int d : dims) total *= d;
    if (total != op.rows() || op.rows() != op.cols())
        throw DimensionMismatchError("partial_trace: dims product != operator dim");
    if (keep < 0 || keep >= static_cast<int>(dims.size()))
        throw DimensionMismatchError("partial_trace: keep index out of range");

    Eigen::Index left = 1, right = 1;
    for (int k = 0; k < keep; ++k) left *= dims[k];
    for (size_t k = keep + 1; k < dims.size(); ++k) right *= dims[k];
    Eigen::Index d = dims[keep];

    Matrix out = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            Complex s = 0.0;
            for (Eigen::Index l = 0; l < left; ++l)
                for (Eigen::Index r = 0; r < right; ++r) {
                    Eigen::Index row = (l * d + i) * right + r;
                    Eigen::Index col = (l * d + j) * right + r;
                    s += op(row, col);
                }
            out(i, j) = s;
        }
    return out;
}

std::pair<RealVector, Matrix> eig_hermitian(const Matrix& op, double tol) {
    double nh = (op - op.adjoint()).cwiseAbs().maxCoeff();
    if (nh >= tol)
        throw NonHermitianError("eig_hermitian: |A - A^dag| = " + std::to_string(nh) +
                                " exceeds tol " + std::to_string(tol));
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (op + op.adjoint()));
    if (es.info() != Eigen::Success) throw Error("eig_hermitian: solver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

Matrix propagator(const Matrix& hamiltonian, double t) {
    auto [w, v] = eig_hermitian(hamiltonian);
    Vector phases(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k)
        phases(k) = std::exp(Complex(0.0, -w(k) * t));
    return v * phases.asDiagonal() * v.adjoint();
}

DensityOperator evolve(const Matrix& hamiltonian, double t, const DensityOperator& state) {
    if (hamiltonian.rows() != state.dim())
        throw DimensionMismatchError("evolve: H and state dims differ");
    Matrix u = propagator(hamiltonian, t);
    return DensityOperator(u * state.matrix() * u.adjoint());
}

}  // namespace thermoqfi::hilbert
