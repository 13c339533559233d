#include "thermoqfi/metric_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace thermoqfi::phase_space {

using hilbert::Complex;

namespace {

RealVector husimi_values(const Matrix& coh, const Matrix& rho_coh) {
    const int n = static_cast<int>(coh.cols());
    RealVector q(n);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) q(j) = coh.col(j).dot(rho_coh.col(j)).real();
    return q;
}

Vector pow_scale(const RealVector& eigs, double expo, const Eigen::Ref<const Vector>& v) {
    return (eigs.array().pow(expo).cast<Complex>() * v.array()).matrix();
}

}  // namespace

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw Error("gauss_legendre_01: need n >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    // Newton iteration on P_n over [-1,1], mapped to [0,1]
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
}

const Eigen::MatrixXd& MetricKernel::dense() const {
    if (!dense_) throw Error("MetricKernel: dense matrix not materialized at this size");
    return *dense_;
}

double MetricKernel::entry(int i, int j) const {
    if (kind_ == KernelKind::SldT) {
        Complex a = coh_.col(i).dot(rho_coh_.col(j));  // <a_i|rho|a_j>
        Complex b = coh_.col(i).dot(coh_.col(j));      // <a_i|a_j>
        return (std::conj(a) * b).real();
    }
    double acc = 0.0;
    for (size_t k = 0; k < si_nodes_.size(); ++k) {
        Vector y1 = pow_scale(rho_eigs_, 1.0 - si_nodes_[k], eigbasis_coh_.col(j));
        Vector y2 = pow_scale(rho_eigs_, si_nodes_[k], eigbasis_coh_.col(i));
        Complex m1 = eigbasis_coh_.col(i).dot(y1);  // <a_i|rho^{1-l}|a_j>
        Complex m2 = eigbasis_coh_.col(j).dot(y2);  // <a_j|rho^l|a_i>
        acc += si_weights_[k] * (m1 * m2).real();
    }
    return acc;
}

Eigen::VectorXd MetricKernel::s_column(int j) const {
    const int n = size();
    Eigen::VectorXd col(n);
    if (kind_ == KernelKind::SldT) {
        Vector a = coh_.adjoint() * rho_coh_.col(j);  // <a_i|rho|a_j>
        Vector b = coh_.adjoint() * coh_.col(j);      // <a_i|a_j>
        col = (a.conjugate().array() * b.array()).real();
    } else {
        col.setZero();
        for (size_t k = 0; k < si_nodes_.size(); ++k) {
            Vector y1 = pow_scale(rho_eigs_, 1.0 - si_nodes_[k], eigbasis_coh_.col(j));
            Vector m1 = eigbasis_coh_.adjoint() * y1;  // <a_i|rho^{1-l}|a_j>
            Vector y2 = pow_scale(rho_eigs_, si_nodes_[k], eigbasis_coh_.col(j));
            Vector m2 = (eigbasis_coh_.adjoint() * y2).conjugate();  // <a_j|rho^l|a_i>
            col += (m1.array() * m2.array()).real().matrix() * si_weights_[k];
        }
    }
    return sqrt_w_(j) * (sqrt_w_.array() * col.array()).matrix();
}

Eigen::VectorXd MetricKernel::weighted_diagonal() const {
    const int n = size();
    Eigen::VectorXd diag(n);
    if (kind_ == KernelKind::SldT) {
        for (int i = 0; i < n; ++i)
            diag(i) = sqrt_w_(i) * sqrt_w_(i) * q_diag_(i) * coh_.col(i).squaredNorm();
        return diag;
    }
    diag.setZero();
    for (size_t k = 0; k < si_nodes_.size(); ++k) {
        Matrix y1 = rho_eigs_.array().pow(1.0 - si_nodes_[k]).cast<Complex>().matrix().asDiagonal() *
                    eigbasis_coh_;
        Matrix y2 = rho_eigs_.array().pow(si_nodes_[k]).cast<Complex>().matrix().asDiagonal() *
                    eigbasis_coh_;
        for (int i = 0; i < n; ++i) {
            Complex m1 = eigbasis_coh_.col(i).dot(y1.col(i));
            Complex m2 = eigbasis_coh_.col(i).dot(y2.col(i));
            diag(i) += si_weights_[k] * (m1 * m2).real();
        }
    }
    return (sqrt_w_.array().square() * diag.array()).matrix();
}

void MetricKernel::factorize(const KernelOptions& opts) {
    const int n = size();
    eps_cut_ = opts.eps_cut;

    if (n <= opts.dense_threshold) {
        Eigen::MatrixXd k(n, n);
        if (kind_ == KernelKind::SldT) {
            Matrix a = coh_.adjoint() * rho_coh_;
            Matrix b = coh_.adjoint() * coh_;
            k = (a.conjugate().array() * b.array()).real();
        } else {
            k.setZero();
            for (size_t m = 0; m < si_nodes_.size(); ++m) {
                Matrix y1 =
                    rho_eigs_.array().pow(1.0 - si_nodes_[m]).cast<Complex>().matrix().asDiagonal() *
                    eigbasis_coh_;
                Matrix y2 =
                    rho_eigs_.array().pow(si_nodes_[m]).cast<Complex>().matrix().asDiagonal() *
                    eigbasis_coh_;
                Matrix m1 = eigbasis_coh_.adjoint() * y1;
                Matrix m2 = eigbasis_coh_.adjoint() * y2;
                k += si_weights_[m] *
                     (m1.array() * m2.transpose().array()).real().matrix();
            }
        }
        dense_ = k;
        Eigen::MatrixXd s = sqrt_w_.asDiagonal() * k * sqrt_w_.asDiagonal();
        s = 0.5 * (s + s.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
        if (es.info() != Eigen::Success) throw Error("MetricKernel: eigensolver failed");
        const auto& w = es.eigenvalues();
        sigma_max_ = w(n - 1);
        min_eval_seen_ = w(0);
        double cut = eps_cut_ * sigma_max_;
        int kept = 0;
        for (int i = 0; i < n; ++i)
            if (w(i) >= cut) ++kept;
        if (kept < 1) kept = 1;
        evals_.resize(kept);
        evecs_.resize(n, kept);
        for (int i = 0; i < kept; ++i) {  // descending
            evals_(i) = w(n - 1 - i);
            evecs_.col(i) = es.eigenvectors().col(n - 1 - i);
        }
        return;
    }

    // Pivoted Cholesky of S against the column oracle; the factor rank is set
    // by the kernel spectrum, not by N.
    Eigen::VectorXd diag = weighted_diagonal();
    const double d0 = diag.maxCoeff();
    const double stop = opts.pivot_stop * d0;
    int cap = 256;
    Eigen::MatrixXd l(n, cap);
    int rank = 0;
    while (rank < n) {
        int piv = 0;
        double dmax = diag.maxCoeff(&piv);
        if (dmax <= stop) break;
        if (rank == cap) {
            cap = std::min(2 * cap, n);
            l.conservativeResize(Eigen::NoChange, cap);
        }
        Eigen::VectorXd col = s_column(piv);
        if (rank > 0) {
            Eigen::VectorXd lrow = l.row(piv).head(rank).transpose();
            col.noalias() -= l.leftCols(rank) * lrow;
        }
        l.col(rank) = col / std::sqrt(dmax);
        diag.array() -= l.col(rank).array().square();
        diag = diag.cwiseMax(0.0);
        diag(piv) = 0.0;
        ++rank;
    }

    Eigen::MatrixXd gram = l.leftCols(rank).transpose() * l.leftCols(rank);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    if (es.info() != Eigen::Success) throw Error("MetricKernel: gram eigensolver failed");
    const auto& w = es.eigenvalues();
    sigma_max_ = w(rank - 1);
    min_eval_seen_ = 0.0;
    double cut = eps_cut_ * sigma_max_;
    int kept = 0;
    for (int i = 0; i < rank; ++i)
        if (w(i) >= cut) ++kept;
    if (kept < 1) kept = 1;
    evals_.resize(kept);
    Eigen::MatrixXd vsub(rank, kept);
    for (int i = 0; i < kept; ++i) {
        evals_(i) = w(rank - 1 - i);
        vsub.col(i) = es.eigenvectors().col(rank - 1 - i) / std::sqrt(evals_(i));
    }
    evecs_.noalias() = l.leftCols(rank) * vsub;
}

void MetricKernel::check_q(const ScalarField& q) const {
    if (q.grid() != grid_)
        throw DimensionMismatchError("g_form: q field on a different grid");
    double scale = std::max(q_diag_.maxCoeff(), 1e-300);
    if ((q.values() - q_diag_).cwiseAbs().maxCoeff() > 1e-8 * scale)
        throw Error("g_form: q field does not match the kernel's state");
}

void MetricKernel::require_solvable() const {
    if (rank() < 3)
        throw KernelDegenerateError("MetricKernel: cutoff leaves " +
                                    std::to_string(rank()) +
                                    " singular values; metric solve is degenerate");
}

double MetricKernel::g_form(const ScalarField& q, const ScalarField& f1,
                            const ScalarField& f2) const {
    require_solvable();
    check_q(q);
    require_same_grid(q, f1);
    require_same_grid(q, f2);
    Eigen::VectorXd v1 =
        (sqrt_w_.array() * q.values().array() * f1.values().array()).matrix();
    Eigen::VectorXd v2 =
        (sqrt_w_.array() * q.values().array() * f2.values().array()).matrix();
    Eigen::VectorXd c = evecs_.transpose() * v2;
    c.array() /= evals_.array();
    return v1.dot(evecs_ * c);
}

ScalarField MetricKernel::solve(const ScalarField& q, const ScalarField& f2) const {
    require_solvable();
    check_q(q);
    require_same_grid(q, f2);
    Eigen::VectorXd v2 =
        (sqrt_w_.array() * q.values().array() * f2.values().array()).matrix();
    Eigen::VectorXd c = evecs_.transpose() * v2;
    c.array() /= evals_.array();
    Eigen::VectorXd u = evecs_ * c;
    return ScalarField(grid_, (u.array() / sqrt_w_.array()).matrix());
}

RealVector MetricKernel::apply(const RealVector& f) const {
    const int n = size();
    if (f.size() != n) throw DimensionMismatchError("apply: field size mismatch");
    Vector v = (grid_->weights().array() * f.array()).cast<Complex>().matrix();
    RealVector out(n);
    if (kind_ == KernelKind::SldT) {
        Matrix g2 = rho_coh_ * v.asDiagonal() * coh_.adjoint();  // rho * P
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) out(i) = coh_.col(i).dot(g2 * coh_.col(i)).real();
    } else {
        Matrix p = eigbasis_coh_ * v.asDiagonal() * eigbasis_coh_.adjoint();
        const int d = static_cast<int>(p.rows());
        Matrix mid = Matrix::Zero(d, d);
        for (size_t k = 0; k < si_nodes_.size(); ++k) {
            Vector p1 = rho_eigs_.array().pow(1.0 - si_nodes_[k]).cast<Complex>();
            Vector p2 = rho_eigs_.array().pow(si_nodes_[k]).cast<Complex>();
            mid += si_weights_[k] * (p1.asDiagonal() * p * p2.asDiagonal());
        }
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i)
            out(i) = eigbasis_coh_.col(i).dot(mid * eigbasis_coh_.col(i)).real();
    }
    return out;
}

double MetricKernel::row_measure_residual() const {
    RealVector ones = RealVector::Ones(size());
    return (apply(ones) - q_diag_).cwiseAbs().maxCoeff();
}

double MetricKernel::symmetry_residual(int max_samples) const {
    if (dense_) return (*dense_ - dense_->transpose()).cwiseAbs().maxCoeff();
    double worst = 0.0;
    const int n = size();
    uint64_t state = 0x9e3779b97f4a7c15ull;
    auto next = [&state]() {
        state += 0x9e3779b97f4a7c15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    };
    for (int s = 0; s < max_samples; ++s) {
        int i = static_cast<int>(next() % n);
        int j = static_cast<int>(next() % n);
        worst = std::max(worst, std::abs(entry(i, j) - entry(j, i)));
    }
    return worst;
}

MetricKernel t_kernel(const DensityOperator& rho, GridPtr grid, const KernelOptions& opts) {
    if (!grid) throw Error("t_kernel: null grid");
    MetricKernel k;
    k.kind_ = KernelKind::SldT;
    k.grid_ = std::move(grid);
    k.coh_ = coherent_matrix(*k.grid_, rho.dim());
    k.rho_coh_.noalias() = rho.matrix() * k.coh_;
    k.q_diag_ = husimi_values(k.coh_, k.rho_coh_);
    k.sqrt_w_ = k.grid_->weights().cwiseSqrt();
    k.factorize(opts);
    return k;
}

MetricKernel t_si_kernel(const DensityOperator& rho, GridPtr grid, int lambda_nodes,
                         const KernelOptions& opts) {
    if (!grid) throw Error("t_si_kernel: null grid");
    if (lambda_nodes < 2) throw Error("t_si_kernel: need >= 2 lambda nodes");
    MetricKernel k;
    k.kind_ = KernelKind::SiT;
    k.grid_ = std::move(grid);

    auto [p, u] = hilbert::eig_hermitian(rho.matrix());
    if (opts.si_eigenvalue_floor < 0.0 && p.minCoeff() <= 0.0)
        throw SingularStateError("t_si_kernel: rank-deficient state and floor disabled");
    // Eigenvalues below the floor are snapped to exact zero: p^lambda of a
    // raised near-zero mode is revived by the lambda -> 0,1 endpoint nodes,
    // while an exact zero drops out of the integrand altogether.
    k.rho_eigs_ = p;
    if (opts.si_eigenvalue_floor >= 0.0) {
        double cut = opts.si_eigenvalue_floor * std::max(p.maxCoeff(), 0.0);
        for (Eigen::Index i = 0; i < k.rho_eigs_.size(); ++i)
            if (k.rho_eigs_(i) < cut || k.rho_eigs_(i) < 0.0) k.rho_eigs_(i) = 0.0;
    }

    Matrix coh = coherent_matrix(*k.grid_, rho.dim());
    k.eigbasis_coh_.noalias() = u.adjoint() * coh;
    Matrix rho_coh = rho.matrix() * coh;
    k.q_diag_ = husimi_values(coh, rho_coh);
    k.sqrt_w_ = k.grid_->weights().cwiseSqrt();
    gauss_legendre_01(lambda_nodes, k.si_nodes_, k.si_weights_);
    k.factorize(opts);
    return k;
}

double g_form(const MetricKernel& kernel, const ScalarField& q, const ScalarField& f1,
              const ScalarField& f2) {
    return kernel.g_form(q, f1, f2);
}

}  // namespace thermoqfi::phase_space
