#pragma once

// Manufactured solution u*(x, t) = sin(pi x) sin(pi y) s(t) for the nonlinear
// preset a(u) = 1 + u^2, driven through the reaction slot c = -f.

#include "idlab/quadrature.hpp"
#include "idlab/solver.hpp"

#include <cmath>
#include <memory>
#include <vector>

namespace idlab::test {

enum class TimeProfile { Linear, Exponential };  // s = 1 + t (exact under backward Euler), s = e^{-t}

inline double mms_s(TimeProfile p, double t) { return p == TimeProfile::Linear ? 1.0 + t : std::exp(-t); }
inline double mms_ds(TimeProfile p, double t) { return p == TimeProfile::Linear ? 1.0 : -std::exp(-t); }

inline ProblemSpec mms_problem(int n, double tau, TimeProfile prof) {
    constexpr double pi = 3.14159265358979323846;
    auto grid = std::make_shared<const Grid>(build_grid(default_domain(2), n));
    auto exact = [prof](Point x, double t) { return std::sin(pi * x.x) * std::sin(pi * x.y) * mms_s(prof, t); };
    CoefficientSet c;
    c.name = "mms";
    c.a = [](double, double u) { return 1.0 + u * u; };
    c.a_lo = 1.0;
    c.a_hi = 10.0;
    c.range = {-3.0, 3.0};
    // u_t - div(a(u) grad u) = f with the storage d = -u.
    c.c = [prof, exact](Point x, double t, double, Point) {
        const double u = exact(x, t), s = mms_s(prof, t);
        const Point g{s * pi * std::cos(pi * x.x) * std::sin(pi * x.y), s * pi * std::sin(pi * x.x) * std::cos(pi * x.y),
                      0.0};
        const double ut = std::sin(pi * x.x) * std::sin(pi * x.y) * mms_ds(prof, t);
        return (1.0 + u * u) * (-2.0 * pi * pi * u) + 2.0 * u * dot(g, g) - ut;
    };
    ProblemSpec p;
    p.grid = grid;
    p.coeffs = c;
    p.g = exact;
    p.u0 = [exact](Point x) { return exact(x, 0.0); };
    p.tau = tau;
    return p;
}

/// sqrt(sum_n tau ||u^n - u*(t_n)||^2_{L^2}) with lumped weights.
inline double mms_error(const FieldST& u, TimeProfile prof) {
    constexpr double pi = 3.14159265358979323846;
    const Grid& g = u.grid();
    const auto w = g.volume_weights();
    double e = 0.0;
    for (std::size_t n = 1; n < u.n_levels(); ++n) {
        const auto lv = u.level(n);
        const double tau = u.time(n) - u.time(n - 1);
        for (std::size_t k = 0; k < lv.size(); ++k) {
            const Point x = g.point(k);
            const double d = lv[k] - std::sin(pi * x.x) * std::sin(pi * x.y) * mms_s(prof, u.time(n));
            e += tau * w[k] * d * d;
        }
    }
    return std::sqrt(e);
}

/// Lumped L^2 distance of two fields at the final time.
inline double final_level_distance(const FieldST& a, const FieldST& b) {
    const auto w = a.grid().volume_weights();
    const auto ua = a.level(a.n_levels() - 1), ub = b.level(b.n_levels() - 1);
    double e = 0.0;
    for (std::size_t k = 0; k < ua.size(); ++k) e += w[k] * (ua[k] - ub[k]) * (ua[k] - ub[k]);
    return std::sqrt(e);
}

struct ConvergenceResult {
    std::vector<double> steps;   ///< h or tau
    std::vector<double> errors;  ///< errors (space) or successive differences (time)
    std::vector<double> orders;  ///< pairwise orders
    double fitted = 0.0;
};

inline void fill_orders(ConvergenceResult& r) {
    for (std::size_t i = 1; i < r.errors.size(); ++i) {
        r.orders.push_back(std::log(r.errors[i - 1] / r.errors[i]) / std::log(r.steps[i - 1] / r.steps[i]));
    }
    r.fitted = loglog_slope(r.steps, r.errors);
}

/// Spatial order: s linear in t, so backward Euler adds no time error.
inline ConvergenceResult mms_space_study(const std::vector<int>& cells, double tau) {
    ConvergenceResult r;
    for (int n : cells) {
        r.steps.push_back(1.0 / n);
        r.errors.push_back(mms_error(solve_parabolic(mms_problem(n, tau, TimeProfile::Linear)), TimeProfile::Linear));
    }
    fill_orders(r);
    return r;
}

/// Temporal order by self-convergence on a fixed grid: the differences
/// ||u_tau(T) - u_{tau/2}(T)|| shrink like tau^q.
inline ConvergenceResult mms_time_study(int cells, const std::vector<double>& taus) {
    ConvergenceResult r;
    std::vector<FieldST> sols;
    for (double tau : taus) sols.push_back(solve_parabolic(mms_problem(cells, tau, TimeProfile::Exponential)));
    for (std::size_t i = 0; i + 1 < sols.size(); ++i) {
        r.steps.push_back(taus[i]);
        r.errors.push_back(final_level_distance(sols[i], sols[i + 1]));
    }
    fill_orders(r);
    return r;
}

} // namespace idlab::test
