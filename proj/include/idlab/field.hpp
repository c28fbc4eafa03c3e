#pragma once

#include "idlab/geometry.hpp"

#include <memory>
#include <span>
#include <vector>

namespace idlab {

/// Nodal values u[level][node] on a fixed grid. Level 0 is the initial state;
/// elliptic solutions have a single level.
class FieldST {
public:
    FieldST(std::shared_ptr<const Grid> grid, std::vector<double> times);

    [[nodiscard]] const Grid& grid() const noexcept { return *grid_; }
    [[nodiscard]] std::shared_ptr<const Grid> grid_ptr() const noexcept { return grid_; }
    [[nodiscard]] std::size_t n_levels() const noexcept { return times_.size(); }
    [[nodiscard]] std::span<const double> times() const noexcept { return times_; }
    [[nodiscard]] double time(std::size_t n) const noexcept { return times_[n]; }

    [[nodiscard]] std::span<const double> level(std::size_t n) const;
    [[nodiscard]] std::span<double> level(std::size_t n);
    [[nodiscard]] std::span<const double> data() const noexcept { return values_; }

    /// Values at the given nodes for one level.
    [[nodiscard]] std::vector<double> trace(std::size_t n, std::span<const std::size_t> nodes) const;

    /// Nodal gradient by central differences (one-sided on the boundary).
    [[nodiscard]] Point nodal_gradient(std::size_t n, std::size_t node) const;
    /// Gradient of the bilinear interpolant at the centre of cell (ci, cj).
    [[nodiscard]] Point cell_gradient(std::size_t n, std::size_t ci, std::size_t cj) const;

    /// sqrt(sum_n tau_n ||u^n||_{H^1}^2) over levels 1..N (lumped L^2 part,
    /// exact Q1 gradient part); the single level for elliptic fields.
    [[nodiscard]] double energy_norm() const;

    [[nodiscard]] double min_value() const;
    [[nodiscard]] double max_value() const;

    /// Bound reported by the solver for energy_norm() (data-dependent surrogate).
    double reported_bound = 0.0;

private:
    std::shared_ptr<const Grid> grid_;
    std::vector<double> times_;
    std::vector<double> values_;
};

/// Q1 gradient energy of one cell: sum over the cell of |grad u_h|^2 for
/// node values (u00, u10, u11, u01).
double q1_cell_energy(double hx, double hy, double u00, double u10, double u11, double u01);

} // namespace idlab
