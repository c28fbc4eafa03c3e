#pragma once

#include <functional>
#include <span>
#include <vector>

namespace idlab {

/// Nodes and weights of a 1-D rule.
struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1], 1 <= n <= 10.
const Rule1D& gauss_legendre(int n);

/// Composite Gauss-Legendre rule over consecutive panels [b_k, b_{k+1}].
Rule1D composite_gauss(std::span<const double> breakpoints, int n);

/// Breakpoints on [lo, hi] that refine dyadically toward `focus`: panel
/// boundaries at focus +- scale * 2^k for k = -levels, ..., until the interval
/// ends, plus `extra` points (kinks of the integrand).
std::vector<double> dyadic_breakpoints(double lo, double hi, double focus, double scale, int levels,
                                       std::span<const double> extra = {});

/// Adaptive Gauss-Kronrod integral of f over [a, b] (signed; a > b allowed).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-12);

/// As above, but panels are split at `breaks` first. Kinks close to a panel
/// edge fall between the Kronrod nodes and are invisible to the error
/// estimate, so known kinks must be passed here.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          std::span<const double> breaks, double tol = 1e-12);

/// Least-squares slope of log(values) against log(xs), using the last
/// `last_k` samples (all when last_k == 0).
double loglog_slope(std::span<const double> xs, std::span<const double> values, std::size_t last_k = 0);

/// max/min of values[i] / reference[i]; infinity if any ratio is <= 0.
double ratio_spread(std::span<const double> values, std::span<const double> reference);

} // namespace idlab
