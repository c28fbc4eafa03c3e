#include "idlab/quadrature.hpp"

#include "idlab/error.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace idlab {

namespace {

template <unsigned N>
Rule1D make_rule() {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    Rule1D r;
    // Boost stores the non-negative half; mirror it.
    for (std::size_t i = x.size(); i-- > 0;) {
        if (x[i] == 0.0) continue;
        r.nodes.push_back(-x[i]);
        r.weights.push_back(w[i]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        r.nodes.push_back(x[i]);
        r.weights.push_back(w[i]);
    }
    return r;
}

const std::array<Rule1D, 10>& rules() {
    static const std::array<Rule1D, 10> r{
        Rule1D{{0.0}, {2.0}}, make_rule<2>(), make_rule<3>(), make_rule<4>(), make_rule<5>(),
        make_rule<6>(),       make_rule<7>(), make_rule<8>(), make_rule<9>(), make_rule<10>()};
    return r;
}

} // namespace

const Rule1D& gauss_legendre(int n) {
    IDLAB_REQUIRE(n >= 1 && n <= 10, "gauss_legendre: 1 <= n <= 10");
    return rules()[static_cast<std::size_t>(n - 1)];
}

Rule1D composite_gauss(std::span<const double> breakpoints, int n) {
    const Rule1D& ref = gauss_legendre(n);
    Rule1D out;
    out.nodes.reserve((breakpoints.size() - 1) * ref.nodes.size());
    out.weights.reserve(out.nodes.capacity());
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
        const double a = breakpoints[k], b = breakpoints[k + 1];
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t q = 0; q < ref.nodes.size(); ++q) {
            out.nodes.push_back(mid + half * ref.nodes[q]);
            out.weights.push_back(half * ref.weights[q]);
        }
    }
    return out;
}

std::vector<double> dyadic_breakpoints(double lo, double hi, double focus, double scale, int levels,
                                       std::span<const double> extra) {
    IDLAB_REQUIRE(hi > lo && scale > 0.0, "dyadic_breakpoints: need hi > lo and scale > 0");
    std::vector<double> pts{lo, hi};
    if (focus >= lo && focus <= hi) pts.push_back(focus);
    const double span = hi - lo;
    for (int k = -levels;; ++k) {
        const double d = std::ldexp(scale, k);
        if (d > span) break;
        if (focus - d > lo) pts.push_back(focus - d);
        if (focus + d < hi) pts.push_back(focus + d);
    }
    for (double e : extra) {
        if (e > lo && e < hi) pts.push_back(e);
    }
    std::sort(pts.begin(), pts.end());
    const double tiny = 1e-14 * std::max(1.0, span);
    std::vector<double> out;
    for (double p : pts) {
        if (out.empty() || p - out.back() > tiny) out.push_back(p);
    }
    out.back() = hi;
    return out;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    // Boost's error estimate has an absolute floor near 1e-15, so small
    // integrals never converge; bisect G7/K15 panels with |K - G| instead.
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    const auto& xk = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = boost::math::quadrature::gauss<double, 7>::weights();
    auto panel = [&](double lo, double hi, double& err) {
        const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
        const double f0 = f(c);
        double k = wk[0] * f0, g = wg[0] * f0;
        for (std::size_t i = 1; i < xk.size(); ++i) {
            const double s = f(c - r * xk[i]) + f(c + r * xk[i]);
            k += wk[i] * s;
            if (i % 2 == 0) g += wg[i / 2] * s;
        }
        err = std::abs(r * (k - g));
        return r * k;
    };
    double err = 0.0;
    const double whole = panel(a, b, err);
    const double target = tol * std::max(std::abs(whole), std::numeric_limits<double>::min());
    const double width = std::abs(b - a);
    // A kink can make |K - G| accidentally small, so a panel is accepted only
    // when its halves also agree with it.
    const double roundoff = 64.0 * std::numeric_limits<double>::epsilon();
    std::function<double(double, double, double, double, int)> refine = [&](double lo, double hi, double value,
                                                                            double e, int depth) {
        const double mid = 0.5 * (lo + hi);
        double e1 = 0.0, e2 = 0.0;
        const double v1 = panel(lo, mid, e1), v2 = panel(mid, hi, e2);
        const double split = v1 + v2;
        const double est = std::max(e1 + e2, std::abs(split - value));
        if (est <= target * std::abs(hi - lo) / width || depth >= 30) return split;
        if (std::max(e, est) <= roundoff * (std::abs(v1) + std::abs(v2))) return split;
        return refine(lo, mid, v1, e1, depth + 1) + refine(mid, hi, v2, e2, depth + 1);
    };
    return refine(a, b, whole, err, 0);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          std::span<const double> breaks, double tol) {
    if (a == b) return 0.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    std::vector<double> pts{lo};
    for (double x : breaks) {
        if (x > lo && x < hi) pts.push_back(x);
    }
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) sum += integrate_adaptive(f, pts[i], pts[i + 1], tol);
    return a < b ? sum : -sum;
}

double loglog_slope(std::span<const double> xs, std::span<const double> values, std::size_t last_k) {
    IDLAB_REQUIRE(xs.size() == values.size() && xs.size() >= 2, "loglog_slope: need >= 2 paired samples");
    const std::size_t n = last_k == 0 ? xs.size() : std::min(last_k, xs.size());
    const std::size_t off = xs.size() - n;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = off; i < xs.size(); ++i) {
        if (!(values[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        const double lx = std::log(xs[i]), ly = std::log(values[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double m = static_cast<double>(n);
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double ratio_spread(std::span<const double> values, std::span<const double> reference) {
    IDLAB_REQUIRE(values.size() == reference.size() && !values.empty(), "ratio_spread: size mismatch");
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double r = values[i] / reference[i];
        if (!(r > 0.0)) return std::numeric_limits<double>::infinity();
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return hi / lo;
}

} // namespace idlab
