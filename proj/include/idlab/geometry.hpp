#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace idlab {

struct Point {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y, s * a.z}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(Point a);

enum class BoundaryKind { Dirichlet, Neumann };

/// Edges of the unit square, in the order used by Domain::bc.
enum class Edge { Bottom = 0, Right = 1, Top = 2, Left = 3 };

/// Unit square (dim 2) or unit cube (dim 3) with the measurement segment
/// Gamma_M = B_eps0(xbar) on the bottom face. The outward normal on Gamma_M is
/// -e_d, so the ball B_eps0(xbar + eps0 n) lies entirely outside the domain.
struct Domain {
    int dim = 2;
    Point xbar{0.5, 0.0, 0.0};
    double eps0 = 0.25;
    double T = 1.0;
    std::array<BoundaryKind, 4> bc{BoundaryKind::Dirichlet, BoundaryKind::Dirichlet,
                                   BoundaryKind::Dirichlet, BoundaryKind::Dirichlet};

    /// Throws PreconditionError unless xbar sits on the bottom face at
    /// distance >= eps0 from its boundary and the bottom edge is Dirichlet.
    void validate() const;

    [[nodiscard]] Point normal() const;
    [[nodiscard]] double gamma_m_measure() const;
};

Domain default_domain(int dim = 2);

/// x̄^eps = x̄ + eps n(x̄). Requires 0 < eps <= eps0.
Point exterior_point(const Domain& domain, double eps);

/// Distance from a point to the closed domain (0 inside).
double distance_to_domain(const Domain& domain, Point p);

enum class NodeClass { Interior, GammaM, BoundaryOther };

/// Tensor-product structured grid on the unit square. Axes may be graded;
/// uniform grids come from build_grid. Node (i, j) has index j * nx + i.
class Grid {
public:
    Grid(Domain domain, std::vector<double> xs, std::vector<double> ys);

    [[nodiscard]] const Domain& domain() const noexcept { return domain_; }
    [[nodiscard]] std::size_t nx() const noexcept { return xs_.size(); }
    [[nodiscard]] std::size_t ny() const noexcept { return ys_.size(); }
    [[nodiscard]] std::size_t n_nodes() const noexcept { return xs_.size() * ys_.size(); }
    [[nodiscard]] std::size_t n_cells_x() const noexcept { return xs_.size() - 1; }
    [[nodiscard]] std::size_t n_cells_y() const noexcept { return ys_.size() - 1; }
    [[nodiscard]] std::size_t n_cells() const noexcept { return n_cells_x() * n_cells_y(); }

    [[nodiscard]] std::size_t node(std::size_t i, std::size_t j) const noexcept { return j * nx() + i; }
    [[nodiscard]] Point point(std::size_t k) const noexcept { return {xs_[k % nx()], ys_[k / nx()], 0.0}; }
    [[nodiscard]] std::span<const double> xs() const noexcept { return xs_; }
    [[nodiscard]] std::span<const double> ys() const noexcept { return ys_; }
    [[nodiscard]] double hx(std::size_t i) const noexcept { return xs_[i + 1] - xs_[i]; }
    [[nodiscard]] double hy(std::size_t j) const noexcept { return ys_[j + 1] - ys_[j]; }
    [[nodiscard]] Point cell_center(std::size_t ci, std::size_t cj) const noexcept {
        return {0.5 * (xs_[ci] + xs_[ci + 1]), 0.5 * (ys_[cj] + ys_[cj + 1]), 0.0};
    }
    /// Uniform spacing; throws if the grid is graded.
    [[nodiscard]] double h() const;
    [[nodiscard]] double h_min() const noexcept { return h_min_; }
    [[nodiscard]] double h_max() const noexcept { return h_max_; }

    [[nodiscard]] NodeClass node_class(std::size_t k) const noexcept { return classes_[k]; }
    [[nodiscard]] bool on_boundary(std::size_t k) const noexcept { return classes_[k] != NodeClass::Interior; }
    [[nodiscard]] std::span<const std::size_t> interior_nodes() const noexcept { return interior_; }
    [[nodiscard]] std::span<const std::size_t> gamma_m_nodes() const noexcept { return gamma_m_; }
    [[nodiscard]] std::span<const std::size_t> other_boundary_nodes() const noexcept { return other_; }

    /// Nodes whose value is prescribed (boundary nodes on Dirichlet edges).
    [[nodiscard]] const std::vector<bool>& dirichlet_mask() const noexcept { return dirichlet_; }

    /// Trapezoidal volume weights; also the lumped Q1 mass.
    [[nodiscard]] std::span<const double> volume_weights() const noexcept { return vol_w_; }
    /// Arc-length weights on the whole boundary (zero at interior nodes).
    [[nodiscard]] std::span<const double> boundary_weights() const noexcept { return bnd_w_; }
    /// Length of each bottom node's dual interval intersected with Gamma_M.
    [[nodiscard]] std::span<const double> gamma_m_weights() const noexcept { return gm_w_; }

private:
    Domain domain_;
    std::vector<double> xs_, ys_;
    std::vector<NodeClass> classes_;
    std::vector<std::size_t> interior_, gamma_m_, other_;
    std::vector<bool> dirichlet_;
    std::vector<double> vol_w_, bnd_w_, gm_w_;
    double h_min_ = 0.0, h_max_ = 0.0;
};

/// Uniform grid with n_cells per axis. Requires n_cells >= 8 and at least
/// four nodes on Gamma_M.
Grid build_grid(const Domain& domain, int n_cells);

struct GradingOptions {
    double h_fine = 0.0;          ///< spacing inside the focus zone
    double fine_halfwidth = 0.0;  ///< half-width of the focus zone around xbar (x) and depth below 0 (y)
    double h_coarse = 1.0 / 32.0; ///< spacing cap away from the focus
    double ratio = 1.15;          ///< geometric growth between the two
};

/// Grid graded geometrically toward xbar: spacing h_fine within fine_halfwidth
/// of xbar (tangentially) and of the bottom edge (normally), growing by
/// `ratio` up to h_coarse.
Grid build_graded_grid(const Domain& domain, const GradingOptions& options);

/// Graded grid resolving the support of a localized datum at scale eps
/// (h <= eps/8 within 2 eps of xbar).
Grid build_grid_for_scale(const Domain& domain, double eps, double h_coarse = 1.0 / 32.0);

/// 1-D node positions on [lo, hi], graded around `focus`.
std::vector<double> graded_axis(double lo, double hi, double focus, const GradingOptions& options);

} // namespace idlab
