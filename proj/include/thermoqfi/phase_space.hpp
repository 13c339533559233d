#ifndef THERMOQFI_PHASE_SPACE_HPP
#define THERMOQFI_PHASE_SPACE_HPP

#include <functional>
#include <vector>

#include "thermoqfi/hilbert.hpp"
#include "thermoqfi/metric_kernel.hpp"
#include "thermoqfi/phase_grid.hpp"

namespace thermoqfi::phase_space {

using hilbert::DensityOperator;

// beta -> state family; the displacement or model structure is captured by
// the closure, only beta varies.
using StateBuilder = std::function<DensityOperator(double beta)>;

inline constexpr double kCoverageTail = 1e-8;
inline constexpr double kQNormTolerance = 1e-4;
inline constexpr double kUnderflowFloor = 1e-300;
inline constexpr double kSldSupportCutoff = 1e-12;

// Husimi Q(alpha) = <alpha|rho|alpha> with unnormalized truncated coherent
// projectors.  Guards that the grid covers the state (Gaussian tail estimate
// from <a^dag a>), and that the quadrature normalization holds.
ScalarField husimi_q(const DensityOperator& rho, GridPtr grid);

// Half-extent around `center` that passes the husimi_q coverage guard, from
// the state's first and second ladder moments.
double suggested_half_extent(const DensityOperator& rho, hilbert::Complex center);

// Score of the Q distribution, d ln Q / d(-beta), by central difference.
// Grid points whose Q underflows are excluded and reported.
struct ScoreField {
    ScalarField field;
    std::vector<int> excluded;  // indices where Q fell below the floor
};
ScoreField score_field(const StateBuilder& builder, double beta, GridPtr grid,
                       double dbeta);

// Phase-space quantum Fisher information: the score's fluctuation under the
// metric g = Q T^{-1} Q, evaluated through the regularized kernel solve.
double qfi_phase_space(const StateBuilder& builder, double beta, GridPtr grid,
                       double eps_cut = 1e-6, double dbeta = 0.0,
                       const KernelOptions& opts = {});

// Fock-basis oracle: F = sum_{p_i+p_j>tau} 2 |<i|d rho/d(-beta)|j>|^2/(p_i+p_j),
// with the derivative taken by central difference.
double sld_qfi(const StateBuilder& builder, double beta, double dbeta = 0.0,
               double tau = kSldSupportCutoff);

// default central-difference step: 1e-4 * beta
double default_dbeta(double beta);

// spacing/extent policy used when the caller does not pin a grid: a square
// centered on the state displacement; spacing grows ~ sqrt((1+nbar)/2) with
// the thermal width so the point count stays bounded
struct GridPolicy {
    double radius_sigmas = 4.3;  // half-extent = radius_sigmas*sqrt(1+nbar) + margin
    double margin = 1.0;
    double base_spacing = 0.2;
    bool scale_spacing = true;
    double max_spacing = 0.45;

    GridPtr make(hilbert::Complex center, double nbar) const;
};

}  // namespace thermoqfi::phase_space

#endif
