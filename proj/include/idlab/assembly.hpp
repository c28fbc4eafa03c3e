#pragma once

// Q1 (bilinear) discretization on a tensor grid.
//
// Per-cell diffusion a_c = a(t, mean of the four nodal values), per-cell drift
// b_c at the cell centre, reaction and storage lumped at the nodes. All vectors
// span the full node set, so boundary rows carry the discrete conormal flux.

#include "idlab/coefficients.hpp"
#include "idlab/field.hpp"
#include "idlab/sparse.hpp"

#include <array>
#include <memory>
#include <span>
#include <vector>

namespace idlab {

/// Full-node terms of the discrete weak form at one time level.
struct LevelTerms {
    std::vector<double> stiff;     ///< K(a) u
    std::vector<double> drift;     ///< sum_c b_c . int_c grad v_i
    std::vector<double> reaction;  ///< m_i c(x_i, t, u_i, grad u_i)
    std::vector<double> storage;   ///< m_i d(t, u_i); empty in elliptic mode
};

class Assembler {
public:
    explicit Assembler(std::shared_ptr<const Grid> grid);

    [[nodiscard]] const Grid& grid() const noexcept { return *grid_; }
    [[nodiscard]] std::shared_ptr<const Grid> grid_ptr() const noexcept { return grid_; }

    /// Full n_nodes x n_nodes matrix with the 9-point pattern.
    [[nodiscard]] CsrMatrix empty_matrix() const;
    /// K = sum_c a_c K_c into a matrix from empty_matrix().
    void stiffness(std::span<const double> cell_a, CsrMatrix& K) const;

    [[nodiscard]] std::vector<double> cell_means(std::span<const double> u) const;
    [[nodiscard]] std::vector<double> cell_diffusion(const CoefficientSet& c, double t, std::span<const double> u) const;
    [[nodiscard]] std::vector<Point> cell_drift(const CoefficientSet& c, double t, std::span<const double> u) const;
    /// out_i = sum over cells c of b_c . int_c grad v_i (overwrites out).
    void drift_vector(std::span<const Point> cell_b, std::span<double> out) const;
    void reaction_vector(const CoefficientSet& c, double t, std::span<const double> u, std::span<double> out) const;
    void storage_vector(const CoefficientSet& c, double t, std::span<const double> u, std::span<double> out) const;

    /// Nodal gradient by central differences, one-sided at the boundary.
    [[nodiscard]] Point nodal_gradient(std::span<const double> u, std::size_t node) const;

    /// All four terms at one level. `drift_override`, when non-empty,
    /// replaces b(x, t, u) per cell (coupled solver).
    [[nodiscard]] LevelTerms terms(const CoefficientSet& c, double t, std::span<const double> u, bool with_storage,
                                   std::span<const Point> drift_override = {}) const;

    /// Free (non-Dirichlet) nodes and the reduced system over them.
    [[nodiscard]] std::span<const std::size_t> free_nodes() const noexcept { return free_; }
    [[nodiscard]] CsrMatrix empty_reduced() const;
    /// J = K restricted to free nodes, plus diag_add on its diagonal.
    void restrict_to_free(const CsrMatrix& K, std::span<const double> diag_add, CsrMatrix& J) const;

private:
    std::shared_ptr<const Grid> grid_;
    CsrMatrix pattern_;
    std::vector<std::array<std::int64_t, 16>> cell_slots_;
    std::vector<std::size_t> free_;
    CsrMatrix reduced_pattern_;
    std::vector<std::int64_t> reduced_to_full_;
    std::vector<std::int64_t> reduced_diag_;
};

/// Element stiffness of a unit-coefficient hx x hy cell, local node order
/// (0,0), (1,0), (1,1), (0,1).
std::array<double, 16> q1_element_stiffness(double hx, double hy);

} // namespace idlab
