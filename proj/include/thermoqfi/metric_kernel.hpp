#ifndef THERMOQFI_METRIC_KERNEL_HPP
#define THERMOQFI_METRIC_KERNEL_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "thermoqfi/hilbert.hpp"
#include "thermoqfi/phase_grid.hpp"

namespace thermoqfi::phase_space {

using hilbert::DensityOperator;

enum class KernelKind { SldT, SiT };

struct KernelOptions {
    double eps_cut = 1e-6;        // relative cutoff for the truncated pseudo-inverse
    int dense_threshold = 1500;   // full eigendecomposition for N <= this
    double pivot_stop = 1e-8;     // pivoted-Cholesky stop, relative to max diagonal
    int si_lambda_nodes = 32;     // Gauss-Legendre nodes for the lambda integral
    // rho eigenvalues below floor * max are snapped to exact zero before
    // powering; negative disables the treatment (singular states then throw)
    double si_eigenvalue_floor = 1e-14;
};

// Discretized transformation kernel T(alpha_i, alpha_j) together with the
// truncated spectral factorization of the weighted form
// S = W^{1/2} K W^{1/2}.  The factorization keeps eigenpairs with
// sigma >= eps_cut * sigma_max and backs the regularized metric solve
//   (W K W) x = W (Q f),   g(f1,f2) = (Q f1)^T W x.
//
// Two factorization routes produce the same truncated spectrum: a dense
// eigendecomposition for small grids, and a diagonal-pivoted Cholesky of S
// followed by an eigendecomposition of the factor Gram matrix for large
// ones (S is PSD with rapidly decaying spectrum, so the factor rank stays
// far below N).
class MetricKernel {
  public:
    KernelKind kind() const { return kind_; }
    const GridPtr& grid() const { return grid_; }
    int size() const { return grid_->size(); }
    double eps_cut() const { return eps_cut_; }
    int rank() const { return static_cast<int>(evals_.size()); }
    double sigma_max() const { return sigma_max_; }

    // Husimi Q of the state the kernel was built from.
    const RealVector& q_diag() const { return q_diag_; }

    bool has_dense() const { return dense_.has_value(); }
    const Eigen::MatrixXd& dense() const;

    // smallest eigenvalue of S seen by the factorization (dense route only;
    // the pivoted route clamps at zero by construction)
    double min_weighted_eigenvalue() const { return min_eval_seen_; }

    double g_form(const ScalarField& q, const ScalarField& f1,
                  const ScalarField& f2) const;
    ScalarField solve(const ScalarField& q, const ScalarField& f2) const;

    // forward action y_i = Sum_j K_ij w_j f_j
    RealVector apply(const RealVector& f) const;

    // single kernel entry from the factors (for sampled checks at scale)
    double entry(int i, int j) const;

    // max_i |Sum_j w_j K_ij - Q_i|; exact coherent-state completeness makes
    // this a quadrature-limited identity for the SLD-T kernel
    double row_measure_residual() const;

    double symmetry_residual(int max_samples = 2000) const;

    friend MetricKernel t_kernel(const DensityOperator&, GridPtr, const KernelOptions&);
    friend MetricKernel t_si_kernel(const DensityOperator&, GridPtr, int,
                                    const KernelOptions&);

  private:
    MetricKernel() = default;

    Eigen::VectorXd s_column(int j) const;  // column of S from the factors
    Eigen::VectorXd weighted_diagonal() const;
    void factorize(const KernelOptions& opts);
    void check_q(const ScalarField& q) const;
    void require_solvable() const;

    KernelKind kind_ = KernelKind::SldT;
    GridPtr grid_;
    RealVector q_diag_;
    RealVector sqrt_w_;

    // SLD-T factors
    Matrix coh_;      // dim x N coherent amplitudes
    Matrix rho_coh_;  // rho * coh_

    // SI-T factors
    Matrix eigbasis_coh_;       // U^dag coh_ in the rho eigenbasis
    RealVector rho_eigs_;       // floored eigenvalues of rho
    std::vector<double> si_nodes_, si_weights_;

    std::optional<Eigen::MatrixXd> dense_;
    Eigen::VectorXd evals_;   // kept eigenvalues of S, descending
    Eigen::MatrixXd evecs_;   // N x rank
    double sigma_max_ = 0.0;
    double min_eval_seen_ = 0.0;
    double eps_cut_ = 0.0;
};

// T(a,a') = Tr[{Pi_a, Pi_a'} rho] = Re[<a'|rho|a><a|a'>] on the grid, with
// unnormalized truncated coherent projectors.
MetricKernel t_kernel(const DensityOperator& rho, GridPtr grid,
                      const KernelOptions& opts = {});

// T_SI(a,a') = Integral_0^1 dlambda Tr[Pi_a rho^{1-l} Pi_a' rho^l] via
// Gauss-Legendre quadrature in lambda.
MetricKernel t_si_kernel(const DensityOperator& rho, GridPtr grid,
                         int lambda_nodes, const KernelOptions& opts = {});

// free-function form of the metric bilinear form
double g_form(const MetricKernel& kernel, const ScalarField& q,
              const ScalarField& f1, const ScalarField& f2);

// Gauss-Legendre nodes/weights on [0,1]
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace thermoqfi::phase_space

#endif
