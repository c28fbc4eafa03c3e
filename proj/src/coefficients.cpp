#include "idlab/coefficients.hpp"

#include "idlab/error.hpp"
#include "idlab/log.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace idlab {

namespace {

// Index of the interval [k[i], k[i+1]] containing x, with x clamped to the knot range.
std::pair<std::size_t, double> locate(const std::vector<double>& k, double x) {
    if (x <= k.front()) return {0, 0.0};
    if (x >= k.back()) return {k.size() - 2, 1.0};
    const auto it = std::upper_bound(k.begin(), k.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - k.begin()) - 1;
    return {i, (x - k[i]) / (k[i + 1] - k[i])};
}

} // namespace

double CoefficientSet::clamp(double u) const {
    if (u >= range.lo && u <= range.hi) return u;
    if (!clamp_warned_->exchange(true)) {
        logger().warn("coefficients '{}': u = {} outside [{}, {}], clamping for coefficient evaluation", name, u,
                      range.lo, range.hi);
    }
    return std::clamp(u, range.lo, range.hi);
}

double CoefficientSet::eval_a(double t, double u) const {
    const double v = a(t, clamp(u));
    const double slack = 1e-12 * std::max(1.0, a_hi);
    if (!(v >= a_lo - slack && v <= a_hi + slack)) {
        std::ostringstream os;
        os << "coefficients '" << name << "': a(" << t << ", " << u << ") = " << v << " outside [" << a_lo << ", "
           << a_hi << "]";
        throw PreconditionError(os.str());
    }
    return v;
}

Point CoefficientSet::eval_b(Point x, double t, double u) const { return b ? b(x, t, clamp(u)) : Point{}; }

double CoefficientSet::eval_c(Point x, double t, double u, Point grad_u) const {
    return c ? c(x, t, clamp(u), grad_u) : 0.0;
}

double CoefficientSet::eval_d(double t, double u) const { return d ? d(t, u) : -u; }

double CoefficientSet::eval_d_prime(double t, double u) const {
    if (!d) return -1.0;
    if (d_prime) return d_prime(t, u);
    const double h = 1e-6 * std::max(1.0, std::abs(u));
    return (d(t, u + h) - d(t, u - h)) / (2.0 * h);
}

void CoefficientSet::validate() const {
    IDLAB_REQUIRE(static_cast<bool>(a), "coefficients '" + name + "': a is not set");
    IDLAB_REQUIRE(a_lo > 0.0 && a_lo <= a_hi, "coefficients '" + name + "': need 0 < a_lo <= a_hi");
    IDLAB_REQUIRE(range.lo < range.hi, "coefficients '" + name + "': empty value range");
}

CoefficientSet constant_preset(double a0, ValueRange range) {
    IDLAB_REQUIRE(a0 > 0.0, "constant_preset: a0 must be positive");
    CoefficientSet s;
    s.name = "constant";
    s.a = [a0](double, double) { return a0; };
    s.a_lo = s.a_hi = a0;
    s.C_A = a0;
    s.range = range;
    s.a_depends_on_u = false;
    return s;
}

CoefficientSet affine_preset(double alpha, double beta, ValueRange range) {
    const double v0 = alpha + beta * range.lo, v1 = alpha + beta * range.hi;
    IDLAB_REQUIRE(std::min(v0, v1) > 0.0, "affine_preset: a must stay positive on the value range");
    CoefficientSet s;
    s.name = "affine";
    s.a = [alpha, beta](double, double u) { return alpha + beta * u; };
    s.a_lo = std::min(v0, v1);
    s.a_hi = std::max(v0, v1);
    s.C_A = std::max(s.a_hi, std::abs(beta));
    s.range = range;
    s.a_depends_on_u = beta != 0.0;
    return s;
}

CoefficientSet bioheat_preset(const BioheatParams& p) {
    IDLAB_REQUIRE(p.kappa > 0.0 && p.u_b > 0.0 && p.c_b >= 0.0, "bioheat_preset: need kappa, u_b > 0 and c_b >= 0");
    CoefficientSet s;
    s.name = "bioheat";
    s.a = [k = p.kappa, ub = p.u_b](double, double u) { return k * (1.0 + u / ub); };
    s.c = [cb = p.c_b, ub = p.u_b](Point, double, double u, Point) { return -cb * (ub - u); };
    s.a_lo = p.kappa;
    s.a_hi = 2.0 * p.kappa;
    s.C_A = std::max({2.0 * p.kappa, p.kappa / p.u_b, p.c_b * p.u_b, p.c_b});
    s.range = {0.0, p.u_b};
    s.C_0 = p.u_b;
    return s;
}

CoefficientSet chemotaxis_preset(const ChemotaxisParams& p) {
    IDLAB_REQUIRE(p.diffusion > 0.0, "chemotaxis_preset: diffusion must be positive");
    CoefficientSet s = constant_preset(p.diffusion, {0.0, 1.0});
    s.name = "chemotaxis";
    s.C_A = std::max({p.diffusion, std::abs(p.chi), std::abs(p.h_scale)});
    return s;
}

CoefficientSet table_preset(std::vector<double> u_knots, std::vector<double> values, std::vector<double> t_knots) {
    IDLAB_REQUIRE(u_knots.size() >= 2, "table_preset: need at least two u knots");
    IDLAB_REQUIRE(std::is_sorted(u_knots.begin(), u_knots.end()) &&
                      std::adjacent_find(u_knots.begin(), u_knots.end()) == u_knots.end(),
                  "table_preset: u knots must be strictly increasing");
    const std::size_t nt = t_knots.empty() ? 1 : t_knots.size();
    IDLAB_REQUIRE(values.size() == nt * u_knots.size(), "table_preset: values must have n_t * n_u entries");
    IDLAB_REQUIRE(t_knots.empty() || t_knots.size() >= 2, "table_preset: need at least two time knots");
    IDLAB_REQUIRE(std::is_sorted(t_knots.begin(), t_knots.end()), "table_preset: time knots must be increasing");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    IDLAB_REQUIRE(*lo > 0.0, "table_preset: knot values must be positive");

    CoefficientSet s;
    s.name = "table";
    s.a_lo = *lo;
    s.a_hi = *hi;
    s.range = {u_knots.front(), u_knots.back()};
    double slope = 0.0;
    for (std::size_t r = 0; r < nt; ++r) {
        for (std::size_t i = 0; i + 1 < u_knots.size(); ++i) {
            const std::size_t k = r * u_knots.size() + i;
            slope = std::max(slope, std::abs(values[k + 1] - values[k]) / (u_knots[i + 1] - u_knots[i]));
        }
    }
    s.C_A = std::max(s.a_hi, slope);
    s.a_depends_on_u = *lo != *hi;
    s.a_depends_on_t = nt > 1;
    s.a_kinks = u_knots;
    s.a = [uk = std::move(u_knots), v = std::move(values), tk = std::move(t_knots)](double t, double u) {
        const auto [i, f] = locate(uk, u);
        const std::size_t nu = uk.size();
        auto row = [&](std::size_t r) { return (1.0 - f) * v[r * nu + i] + f * v[r * nu + i + 1]; };
        if (tk.empty()) return row(0);
        const auto [r, g] = locate(tk, t);
        return (1.0 - g) * row(r) + g * row(r + 1);
    };
    return s;
}

CoefficientSet with_lower_order(CoefficientSet base, const LowerOrderTerms& terms) {
    IDLAB_REQUIRE(terms.d_scale > 0.0, "with_lower_order: d_scale must be positive");
    if (terms.b.x != 0.0 || terms.b.y != 0.0 || terms.b.z != 0.0) {
        base.b = [b = terms.b](Point, double, double) { return b; };
    } else {
        base.b = nullptr;
    }
    if (terms.c0 != 0.0 || terms.c1 != 0.0) {
        base.c = [c0 = terms.c0, c1 = terms.c1](Point, double, double u, Point) { return c0 + c1 * u; };
    } else {
        base.c = nullptr;
    }
    if (terms.d_scale != 1.0) {
        base.d = [s = terms.d_scale](double, double u) { return -s * u; };
        base.d_prime = [s = terms.d_scale](double, double) { return -s; };
    } else {
        base.d = nullptr;
        base.d_prime = nullptr;
    }
    return base;
}

CoefficientSet preset_by_name(const std::string& name) {
    if (name == "constant") return constant_preset(1.0);
    if (name == "affine") return affine_preset(1.0, 1.0);
    if (name == "bioheat") return bioheat_preset();
    if (name == "chemotaxis") return chemotaxis_preset();
    throw PreconditionError("unknown coefficient preset '" + name + "'");
}

} // namespace idlab
