#ifndef THERMOQFI_PHASE_GRID_HPP
#define THERMOQFI_PHASE_GRID_HPP

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "thermoqfi/errors.hpp"
#include "thermoqfi/hilbert.hpp"

namespace thermoqfi::phase_space {

using hilbert::Complex;
using hilbert::Matrix;
using hilbert::RealVector;
using hilbert::Vector;

// Cell-centered square discretization of the complex-alpha plane under the
// measure d^2alpha/pi: every point carries weight h^2/pi, so the weight sum
// equals the covered area over pi exactly.
class PhaseGrid {
  public:
    static std::shared_ptr<const PhaseGrid> square(Complex center, double half_extent,
                                                   double spacing);

    int size() const { return static_cast<int>(points_.size()); }
    const std::vector<Complex>& points() const { return points_; }
    const RealVector& weights() const { return weights_; }
    double spacing() const { return spacing_; }
    double half_extent() const { return half_extent_; }
    Complex center() const { return center_; }
    double weight_sum() const { return weights_.sum(); }
    // covered area over pi; the analytic value the weight sum must reproduce
    double measure() const;

  private:
    PhaseGrid(Complex center, double half_extent, double spacing);

    std::vector<Complex> points_;
    RealVector weights_;
    Complex center_;
    double half_extent_;
    double spacing_;
    int n_side_;
};

using GridPtr = std::shared_ptr<const PhaseGrid>;

// Real-valued function sampled on a grid.
class ScalarField {
  public:
    ScalarField(GridPtr grid, RealVector values);

    const RealVector& values() const { return values_; }
    RealVector& values() { return values_; }
    const GridPtr& grid() const { return grid_; }
    int size() const { return static_cast<int>(values_.size()); }

    // quadrature Sum_j w_j f_j
    double integral() const;

  private:
    GridPtr grid_;
    RealVector values_;
};

void require_same_grid(const ScalarField& a, const ScalarField& b);

// Unnormalized truncated coherent amplitudes at every grid point, dim x N.
Matrix coherent_matrix(const PhaseGrid& grid, int dim);

}  // namespace thermoqfi::phase_space

#endif
