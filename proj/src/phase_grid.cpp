#include "thermoqfi/phase_grid.hpp"

#include <cmath>
#include <numbers>

namespace thermoqfi::phase_space {

PhaseGrid::PhaseGrid(Complex center, double half_extent, double spacing)
    : center_(center), spacing_(spacing) {
    if (!(half_extent > 0.0) || !(spacing > 0.0))
        throw Error("PhaseGrid: half_extent and spacing must be positive");
    n_side_ = static_cast<int>(std::ceil(2.0 * half_extent / spacing));
    if (n_side_ < 2) n_side_ = 2;
    half_extent_ = 0.5 * n_side_ * spacing;  // cells tile the square exactly
    points_.reserve(static_cast<size_t>(n_side_) * n_side_);
    for (int iy = 0; iy < n_side_; ++iy) {
        double y = -half_extent_ + (iy + 0.5) * spacing;
        for (int ix = 0; ix < n_side_; ++ix) {
            double x = -half_extent_ + (ix + 0.5) * spacing;
            points_.push_back(center + Complex(x, y));
        }
    }
    weights_ = RealVector::Constant(points_.size(),
                                    spacing * spacing / std::numbers::pi);
}

std::shared_ptr<const PhaseGrid> PhaseGrid::square(Complex center, double half_extent,
                                                   double spacing) {
    return std::shared_ptr<const PhaseGrid>(new PhaseGrid(center, half_extent, spacing));
}

double PhaseGrid::measure() const {
    double side = n_side_ * spacing_;
    return side * side / std::numbers::pi;
}

ScalarField::ScalarField(GridPtr grid, RealVector values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw Error("ScalarField: null grid");
    if (values_.size() != grid_->size())
        throw DimensionMismatchError("ScalarField: values/grid size mismatch");
    if (!values_.allFinite()) throw Error("ScalarField: values must be finite");
}

double ScalarField::integral() const {
    return grid_->weights().dot(values_);
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
    if (a.grid() != b.grid())
        throw DimensionMismatchError("fields must share one grid instance");
}

Matrix coherent_matrix(const PhaseGrid& grid, int dim) {
    Matrix c(dim, grid.size());
    const auto& pts = grid.points();
    const int n = grid.size();
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) c.col(j) = hilbert::coherent_amplitudes(pts[j], dim);
    return c;
}

}  // namespace thermoqfi::phase_space
