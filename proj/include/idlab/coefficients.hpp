#pragma once

// Coefficients of
//
//   -div(a(t,u) grad u + b(x,t,u)) + c(x,t,u,grad u) = d/dt d(t,u)
//
// The storage term must be strictly decreasing in u (d(t,u) = -u gives the
// forward heat equation with this sign convention).

#include "idlab/geometry.hpp"
#include "idlab/singular.hpp"

#include <atomic>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace idlab {

struct CoefficientSet {
    std::string name = "custom";
    std::function<double(double t, double u)> a;
    std::function<Point(Point x, double t, double u)> b;              ///< empty means 0
    std::function<double(Point x, double t, double u, Point grad_u)> c; ///< empty means 0
    std::function<double(double t, double u)> d;                      ///< empty means -u
    std::function<double(double t, double u)> d_prime;                ///< optional du-derivative of d

    double a_lo = 1.0;
    double a_hi = 1.0;
    double C_A = 1.0;  ///< W^{1,inf} budget of the coefficients
    double C_0 = 1.0;  ///< bound on the initial data
    ValueRange range{0.0, 1.0};  ///< [g_lo, g_hi], where coefficients are defined
    std::vector<double> a_kinks;  ///< u values where a(t, .) is not smooth, besides the range ends

    bool a_depends_on_u = true;
    bool a_depends_on_t = false;

    /// a(t, clamp(u)); throws PreconditionError if the result leaves [a_lo, a_hi].
    [[nodiscard]] double eval_a(double t, double u) const;
    [[nodiscard]] Point eval_b(Point x, double t, double u) const;
    [[nodiscard]] double eval_c(Point x, double t, double u, Point grad_u) const;
    /// Storage is evaluated without clamping so that it stays strictly monotone.
    [[nodiscard]] double eval_d(double t, double u) const;
    [[nodiscard]] double eval_d_prime(double t, double u) const;

    [[nodiscard]] bool has_b() const noexcept { return static_cast<bool>(b); }
    [[nodiscard]] bool has_c() const noexcept { return static_cast<bool>(c); }

    /// Clamps u into `range`, logging one warning per coefficient set.
    [[nodiscard]] double clamp(double u) const;

    /// Throws PreconditionError on inconsistent metadata.
    void validate() const;

private:
    std::shared_ptr<std::atomic<bool>> clamp_warned_ = std::make_shared<std::atomic<bool>>(false);
};

CoefficientSet constant_preset(double a0, ValueRange range = {});
/// a(u) = alpha + beta u.
CoefficientSet affine_preset(double alpha, double beta, ValueRange range = {});

struct BioheatParams {
    double kappa = 1.0;  ///< base conductivity
    double c_b = 1.0;    ///< perfusion rate
    double u_b = 1.0;    ///< arterial temperature
};

/// Pennes-type heat equation u_t = div(kappa (1 + u/u_b) grad u) + c_b (u_b - u)
/// on the range [0, u_b].
CoefficientSet bioheat_preset(const BioheatParams& params = {});

struct ChemotaxisParams {
    double diffusion = 1.0;
    double chi = 1.0;      ///< sensitivity in b(u) = chi u (1 - u)
    double h_scale = 1.0;  ///< production h(u) = h_scale u
};

/// Coefficients of the cell density equation u_t = div(D grad u + b(u) grad V);
/// the drift b(u) grad V is supplied per cell by the coupled solver.
CoefficientSet chemotaxis_preset(const ChemotaxisParams& params = {});

/// Piecewise-linear a(u) on the knots (u_knots[i], values[i]); constant
/// extension outside. With time knots, values is row-major [t][u] and the
/// interpolation is bilinear.
CoefficientSet table_preset(std::vector<double> u_knots, std::vector<double> values,
                            std::vector<double> t_knots = {});

/// Lower-order terms used to make two coefficient sets differ away from a.
struct LowerOrderTerms {
    Point b{};             ///< constant drift
    double c0 = 0.0;       ///< c = c0 + c1 u
    double c1 = 0.0;
    double d_scale = 1.0;  ///< d(t,u) = -d_scale u
};

CoefficientSet with_lower_order(CoefficientSet base, const LowerOrderTerms& terms);

/// Named preset lookup: constant, affine, bioheat, chemotaxis.
CoefficientSet preset_by_name(const std::string& name);

} // namespace idlab
