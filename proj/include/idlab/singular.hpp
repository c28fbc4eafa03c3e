#pragma once

// Singular harmonic test functions concentrated at the measurement point and
// the localized Dirichlet data built around them.
//
//   Phi(x)        fundamental solution of the Laplacian
//   lambda^eps(x) = n(x̄) . grad Phi(x - x̄^eps),   x̄^eps = x̄ + eps n(x̄)
//
// lambda^eps is harmonic in the domain because its pole sits outside. As
// eps -> 0 it concentrates on Gamma_M; the quadrature routines below measure
// how its norms scale with eps.

#include "idlab/geometry.hpp"
#include "idlab/spacetime.hpp"

#include <optional>
#include <span>
#include <vector>

namespace idlab {

/// -(1/2pi) ln|x| in 2-D, (1/4pi)/|x| in 3-D. Throws at x = 0.
double fundamental(Point x, int dim);
Point fundamental_grad(Point x, int dim);

class SingularTestFn {
public:
    SingularTestFn(const Domain& domain, double eps);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] double eps() const noexcept { return eps_; }
    [[nodiscard]] Point xbar() const noexcept { return xbar_; }
    [[nodiscard]] Point singularity() const noexcept { return pole_; }
    [[nodiscard]] Point normal() const noexcept { return n_; }

    /// lambda^eps(x); defined as 0 at the pole itself.
    [[nodiscard]] double value(Point x) const;
    /// Closed-form gradient (Hessian of Phi applied to n).
    [[nodiscard]] Point grad(Point x) const;
    /// n(x̄) . grad lambda^eps, the normal derivative on the flat segment.
    [[nodiscard]] double normal_derivative(Point x) const { return dot(n_, grad(x)); }

private:
    int dim_;
    double eps_;
    Point xbar_, pole_, n_;
};

struct TimeWindow {
    double t1 = 0.25;
    double t2 = 0.75;
};

struct ValueRange {
    double lo = 0.0;
    double hi = 1.0;
};

/// Spatial hat chi^eps_x̄ (1 on B_{eps/2}, 0 outside B_eps, linear in |x - x̄|
/// between) and temporal bump chi(t) = max{(t - t1)(t2 - t), 0}.
class CutoffPair {
public:
    CutoffPair(Point xbar, double eps, TimeWindow window);

    [[nodiscard]] double spatial(Point x) const;
    [[nodiscard]] Point spatial_grad(Point x) const;
    [[nodiscard]] double temporal(double t) const;
    [[nodiscard]] double temporal_deriv(double t) const;
    [[nodiscard]] double temporal_max() const;
    [[nodiscard]] TimeWindow window() const noexcept { return window_; }
    [[nodiscard]] double eps() const noexcept { return eps_; }
    [[nodiscard]] Point xbar() const noexcept { return xbar_; }

private:
    Point xbar_;
    double eps_;
    TimeWindow window_;
};

/// g^eps(x, t) = g1 + gamma eps^{(3-d)/2} chi^eps_x̄(x) chi(t).
class DirichletDatum {
public:
    DirichletDatum(const Domain& domain, double eps, double g1, double g2, double gamma, TimeWindow window);

    [[nodiscard]] double value(Point x, double t) const;
    /// Tangential gradient along the boundary face containing Gamma_M.
    [[nodiscard]] Point surface_grad(Point x, double t) const;
    [[nodiscard]] double time_derivative(Point x, double t) const;

    [[nodiscard]] double g1() const noexcept { return g1_; }
    [[nodiscard]] double g2() const noexcept { return g2_; }
    [[nodiscard]] double gamma() const noexcept { return gamma_; }
    [[nodiscard]] double amplitude() const noexcept { return amplitude_; }
    [[nodiscard]] double eps() const noexcept { return cut_.eps(); }
    [[nodiscard]] const CutoffPair& cutoffs() const noexcept { return cut_; }
    [[nodiscard]] TimeWindow window() const noexcept { return cut_.window(); }
    /// Value at (x̄, window midpoint).
    [[nodiscard]] double peak() const;

    /// ||g||_{H^1(0,T; H^1(boundary))} by composite Gauss quadrature.
    [[nodiscard]] double h1_h1_norm() const;

private:
    Domain domain_;
    CutoffPair cut_;
    double g1_, g2_, gamma_, amplitude_;
};

/// Localized datum with gamma = 4 (g2 - g1) min(1, eps0^{(d-3)/2}) / T^2,
/// which keeps g1 <= g^eps <= g2 for every eps <= eps0.
DirichletDatum make_dirichlet_datum(const Domain& domain, double eps, double g1, double g2,
                                    TimeWindow window, std::optional<ValueRange> global_range = std::nullopt);

/// phi^eps(x, t) = lambda^eps(x) chi(t) with analytic gradient and d/dt.
SpaceTimeFn make_test_function(const SingularTestFn& fn, const CutoffPair& cut);

/// Tensor-product composite Gauss rule over the unit square/cube, refined
/// dyadically toward x̄ down to panels of size eps/8. Points are stored as
/// offsets from the pole (tangential components and normal depth).
struct SingularVolumeRule {
    std::vector<double> yt1, yt2, yn, w;
    [[nodiscard]] std::size_t size() const noexcept { return w.size(); }
};

SingularVolumeRule build_singular_rule(const SingularTestFn& fn, int order = 0);

/// ||lambda^eps||_{L^p} (gradient = false) or ||grad lambda^eps||_{L^p} for
/// each p; all share one quadrature rule.
std::vector<double> lp_norms(const SingularTestFn& fn, std::span<const double> ps, bool gradient, int order = 0);
double lp_norm_lambda(const SingularTestFn& fn, double p);
double lp_norm_grad_lambda(const SingularTestFn& fn, double p);

struct GammaIntegral {
    double integral = 0.0;   ///< int over Gamma_M ∩ B_eps(x̄) of d_n lambda
    double min_value = 0.0;  ///< smallest d_n lambda at a quadrature node
    std::size_t n_nodes = 0;
};

/// Gamma_M ∩ B_eps(x̄) lies inside Gamma_M because eps <= eps0.
GammaIntegral dn_lambda_gamma_integral(const SingularTestFn& fn, int order = 8);

struct FarFieldBound {
    double max_lambda = 0.0;
    double max_grad = 0.0;
    double ceiling_lambda = 0.0;  ///< bound from |x - x̄^eps| >= eps0/4
    double ceiling_grad = 0.0;
    std::size_t n_points = 0;
};

/// Maxima of |lambda| and |grad lambda| over the points with |x - x̄| >= eps0/2.
FarFieldBound far_field_bound_check(const SingularTestFn& fn, double eps0, std::span<const Point> points);
FarFieldBound far_field_bound_check(const SingularTestFn& fn, const Grid& grid);

/// Uniform lattice of (n+1)^dim points on the closed unit square/cube.
std::vector<Point> lattice_points(int dim, int n);

} // namespace idlab
