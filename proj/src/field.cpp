#include "idlab/field.hpp"

#include "idlab/error.hpp"

#include <algorithm>
#include <cmath>

namespace idlab {

FieldST::FieldST(std::shared_ptr<const Grid> grid, std::vector<double> times)
    : grid_(std::move(grid)), times_(std::move(times)) {
    IDLAB_REQUIRE(grid_ != nullptr && !times_.empty(), "FieldST: need a grid and at least one time level");
    values_.assign(times_.size() * grid_->n_nodes(), 0.0);
}

std::span<const double> FieldST::level(std::size_t n) const {
    const std::size_t m = grid_->n_nodes();
    return std::span<const double>(values_).subspan(n * m, m);
}

std::span<double> FieldST::level(std::size_t n) {
    const std::size_t m = grid_->n_nodes();
    return std::span<double>(values_).subspan(n * m, m);
}

std::vector<double> FieldST::trace(std::size_t n, std::span<const std::size_t> nodes) const {
    const auto u = level(n);
    std::vector<double> out;
    out.reserve(nodes.size());
    for (std::size_t k : nodes) out.push_back(u[k]);
    return out;
}

Point FieldST::nodal_gradient(std::size_t n, std::size_t node) const {
    const Grid& g = *grid_;
    const auto u = level(n);
    const std::size_t i = node % g.nx(), j = node / g.nx();
    const auto xs = g.xs(), ys = g.ys();
    const std::size_t il = i == 0 ? 0 : i - 1, ir = i + 1 == g.nx() ? i : i + 1;
    const std::size_t jl = j == 0 ? 0 : j - 1, jr = j + 1 == g.ny() ? j : j + 1;
    return {(u[g.node(ir, j)] - u[g.node(il, j)]) / (xs[ir] - xs[il]),
            (u[g.node(i, jr)] - u[g.node(i, jl)]) / (ys[jr] - ys[jl]), 0.0};
}

Point FieldST::cell_gradient(std::size_t n, std::size_t ci, std::size_t cj) const {
    const Grid& g = *grid_;
    const auto u = level(n);
    const double u00 = u[g.node(ci, cj)], u10 = u[g.node(ci + 1, cj)];
    const double u11 = u[g.node(ci + 1, cj + 1)], u01 = u[g.node(ci, cj + 1)];
    return {0.5 * ((u10 - u00) + (u11 - u01)) / g.hx(ci), 0.5 * ((u01 - u00) + (u11 - u10)) / g.hy(cj), 0.0};
}

double q1_cell_energy(double hx, double hy, double u00, double u10, double u11, double u01) {
    // Exact integral of |grad u|^2 for the bilinear interpolant.
    const double dx0 = u10 - u00, dx1 = u11 - u01;
    const double dy0 = u01 - u00, dy1 = u11 - u10;
    const double ex = (dx0 * dx0 + dx0 * dx1 + dx1 * dx1) / 3.0;
    const double ey = (dy0 * dy0 + dy0 * dy1 + dy1 * dy1) / 3.0;
    return ex * hy / hx + ey * hx / hy;
}

double FieldST::energy_norm() const {
    const Grid& g = *grid_;
    const auto w = g.volume_weights();
    double total = 0.0;
    const std::size_t first = n_levels() == 1 ? 0 : 1;
    for (std::size_t n = first; n < n_levels(); ++n) {
        const double tau = n == 0 ? 1.0 : times_[n] - times_[n - 1];
        const auto u = level(n);
        double l2 = 0.0, h1 = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k) l2 += w[k] * u[k] * u[k];
        for (std::size_t cj = 0; cj < g.n_cells_y(); ++cj) {
            for (std::size_t ci = 0; ci < g.n_cells_x(); ++ci) {
                h1 += q1_cell_energy(g.hx(ci), g.hy(cj), u[g.node(ci, cj)], u[g.node(ci + 1, cj)],
                                     u[g.node(ci + 1, cj + 1)], u[g.node(ci, cj + 1)]);
            }
        }
        total += tau * (l2 + h1);
    }
    return std::sqrt(total);
}

double FieldST::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double FieldST::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

} // namespace idlab
