#include "idlab/singular.hpp"

#include "idlab/error.hpp"
#include "idlab/kernels.hpp"
#include "idlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace idlab {

namespace {

constexpr double kPi = std::numbers::pi;

} // namespace

double fundamental(Point x, int dim) {
    const double r = norm(x);
    IDLAB_REQUIRE(r > 0.0, "fundamental: singular at the origin");
    return dim == 2 ? -std::log(r) / (2.0 * kPi) : 1.0 / (4.0 * kPi * r);
}

Point fundamental_grad(Point x, int dim) {
    const double r = norm(x);
    IDLAB_REQUIRE(r > 0.0, "fundamental_grad: singular at the origin");
    const double s = dim == 2 ? -1.0 / (2.0 * kPi * r * r) : -1.0 / (4.0 * kPi * r * r * r);
    return s * x;
}

SingularTestFn::SingularTestFn(const Domain& domain, double eps)
    : dim_(domain.dim), eps_(eps), xbar_(domain.xbar), pole_(exterior_point(domain, eps)), n_(domain.normal()) {}

double SingularTestFn::value(Point x) const {
    const Point y = x - pole_;
    if (norm(y) == 0.0) return 0.0;
    return dot(n_, fundamental_grad(y, dim_));
}

Point SingularTestFn::grad(Point x) const {
    const Point y = x - pole_;
    const double r2 = dot(y, y);
    if (r2 == 0.0) return {};
    const double ny = dot(n_, y);
    if (dim_ == 2) {
        return (-1.0 / (2.0 * kPi)) * ((1.0 / r2) * n_ - (2.0 * ny / (r2 * r2)) * y);
    }
    const double r = std::sqrt(r2);
    const double r3 = r2 * r;
    return (-1.0 / (4.0 * kPi)) * ((1.0 / r3) * n_ - (3.0 * ny / (r3 * r2)) * y);
}

CutoffPair::CutoffPair(Point xbar, double eps, TimeWindow window) : xbar_(xbar), eps_(eps), window_(window) {
    IDLAB_REQUIRE(eps > 0.0, "CutoffPair: eps must be positive");
    IDLAB_REQUIRE(window.t1 < window.t2, "CutoffPair: need t1 < t2");
}

double CutoffPair::spatial(Point x) const {
    const double r = norm(x - xbar_);
    if (r <= 0.5 * eps_) return 1.0;
    if (r >= eps_) return 0.0;
    return 2.0 - 2.0 * r / eps_;
}

Point CutoffPair::spatial_grad(Point x) const {
    const Point d = x - xbar_;
    const double r = norm(d);
    if (r <= 0.5 * eps_ || r >= eps_) return {};
    return (-2.0 / (eps_ * r)) * d;
}

double CutoffPair::temporal(double t) const {
    return std::max((t - window_.t1) * (window_.t2 - t), 0.0);
}

double CutoffPair::temporal_deriv(double t) const {
    if (t <= window_.t1 || t >= window_.t2) return 0.0;
    return window_.t1 + window_.t2 - 2.0 * t;
}

double CutoffPair::temporal_max() const {
    const double h = 0.5 * (window_.t2 - window_.t1);
    return h * h;
}

DirichletDatum::DirichletDatum(const Domain& domain, double eps, double g1, double g2, double gamma,
                               TimeWindow window)
    : domain_(domain), cut_(domain.xbar, eps, window), g1_(g1), g2_(g2), gamma_(gamma),
      amplitude_(gamma * std::pow(eps, 0.5 * (3.0 - domain.dim))) {}

double DirichletDatum::value(Point x, double t) const {
    return g1_ + amplitude_ * cut_.spatial(x) * cut_.temporal(t);
}

Point DirichletDatum::surface_grad(Point x, double t) const {
    return (amplitude_ * cut_.temporal(t)) * cut_.spatial_grad(x);
}

double DirichletDatum::time_derivative(Point x, double t) const {
    return amplitude_ * cut_.spatial(x) * cut_.temporal_deriv(t);
}

double DirichletDatum::peak() const { return g1_ + amplitude_ * cut_.temporal_max(); }

double DirichletDatum::h1_h1_norm() const {
    const double eps = cut_.eps();
    const TimeWindow w = cut_.window();
    const double T = domain_.T;

    std::vector<double> tb;
    const double tk[] = {0.0, w.t1, w.t2, T};
    for (int k = 0; k < 3; ++k) {
        const double a = std::clamp(tk[k], 0.0, T), b = std::clamp(tk[k + 1], 0.0, T);
        for (int s = 0; s < 4; ++s) tb.push_back(a + (b - a) * s / 4.0);
    }
    tb.push_back(T);
    tb.erase(std::unique(tb.begin(), tb.end()), tb.end());
    const Rule1D tr = composite_gauss(tb, 8);

    // Excess over the constant g1 on the bottom face; the datum is radial
    // about x̄ there, so 3-D uses polar coordinates.
    const Point xb = domain_.xbar;
    const bool two_d = domain_.dim == 2;
    std::vector<double> sb;
    if (two_d) {
        sb = {xb.x - eps, xb.x - 0.5 * eps, xb.x + 0.5 * eps, xb.x + eps};
    } else {
        sb = {0.0, 0.5 * eps, eps};
    }
    const Rule1D sr = composite_gauss(sb, 6);

    double excess = 0.0;
    for (std::size_t i = 0; i < sr.nodes.size(); ++i) {
        const Point x = two_d ? Point{sr.nodes[i], 0.0, 0.0} : Point{xb.x + sr.nodes[i], xb.y, 0.0};
        const double ws = two_d ? sr.weights[i] : sr.weights[i] * 2.0 * kPi * sr.nodes[i];
        double acc = 0.0;
        for (std::size_t q = 0; q < tr.nodes.size(); ++q) {
            const double t = tr.nodes[q];
            const double g = value(x, t);
            const Point gs = surface_grad(x, t);
            const double gt = time_derivative(x, t);
            const Point gst = (amplitude_ * cut_.temporal_deriv(t)) * cut_.spatial_grad(x);
            acc += tr.weights[q] * (g * g - g1_ * g1_ + dot(gs, gs) + gt * gt + dot(gst, gst));
        }
        excess += ws * acc;
    }
    const double boundary_measure = two_d ? 4.0 : 6.0;
    return std::sqrt(g1_ * g1_ * T * boundary_measure + excess);
}

DirichletDatum make_dirichlet_datum(const Domain& domain, double eps, double g1, double g2, TimeWindow window,
                                    std::optional<ValueRange> global_range) {
    domain.validate();
    IDLAB_REQUIRE(eps > 0.0 && eps <= domain.eps0, "make_dirichlet_datum: need 0 < eps <= eps0");
    IDLAB_REQUIRE(g1 < g2, "make_dirichlet_datum: need g1 < g2");
    IDLAB_REQUIRE(window.t1 > 0.0 && window.t1 < window.t2 && window.t2 < domain.T,
                  "make_dirichlet_datum: need 0 < t1 < t2 < T");
    if (global_range) {
        IDLAB_REQUIRE(global_range->lo <= g1 && g2 <= global_range->hi,
                      "make_dirichlet_datum: [g1, g2] must lie inside the admissible value range");
    }
    const int d = domain.dim;
    const double gamma =
        4.0 * (g2 - g1) * std::min(1.0, std::pow(domain.eps0, 0.5 * (d - 3.0))) / (domain.T * domain.T);
    return DirichletDatum(domain, eps, g1, g2, gamma, window);
}

SpaceTimeFn make_test_function(const SingularTestFn& fn, const CutoffPair& cut) {
    SeparableTerm term;
    term.space = [fn](Point x) { return fn.value(x); };
    term.space_grad = [fn](Point x) { return fn.grad(x); };
    term.time = [cut](double t) { return cut.temporal(t); };
    term.time_deriv = [cut](double t) { return cut.temporal_deriv(t); };
    term.label = "lambda*chi";
    return SpaceTimeFn(std::move(term));
}

SingularVolumeRule build_singular_rule(const SingularTestFn& fn, int order) {
    const int dim = fn.dim();
    if (order <= 0) order = dim == 2 ? 6 : 5;
    const double eps = fn.eps();
    const Point xb = fn.xbar();

    const Rule1D r1 = composite_gauss(dyadic_breakpoints(0.0, 1.0, xb.x, eps, 3), order);
    const Rule1D rn = composite_gauss(dyadic_breakpoints(0.0, 1.0, 0.0, eps, 3), order);
    SingularVolumeRule rule;
    if (dim == 2) {
        const std::size_t n = r1.nodes.size() * rn.nodes.size();
        rule.yt1.reserve(n);
        rule.yn.reserve(n);
        rule.w.reserve(n);
        for (std::size_t j = 0; j < rn.nodes.size(); ++j) {
            for (std::size_t i = 0; i < r1.nodes.size(); ++i) {
                rule.yt1.push_back(r1.nodes[i] - xb.x);
                rule.yn.push_back(rn.nodes[j] + eps);
                rule.w.push_back(r1.weights[i] * rn.weights[j]);
            }
        }
        return rule;
    }
    const Rule1D r2 = composite_gauss(dyadic_breakpoints(0.0, 1.0, xb.y, eps, 3), order);
    const std::size_t n = r1.nodes.size() * r2.nodes.size() * rn.nodes.size();
    rule.yt1.reserve(n);
    rule.yt2.reserve(n);
    rule.yn.reserve(n);
    rule.w.reserve(n);
    for (std::size_t k = 0; k < rn.nodes.size(); ++k) {
        for (std::size_t j = 0; j < r2.nodes.size(); ++j) {
            for (std::size_t i = 0; i < r1.nodes.size(); ++i) {
                rule.yt1.push_back(r1.nodes[i] - xb.x);
                rule.yt2.push_back(r2.nodes[j] - xb.y);
                rule.yn.push_back(rn.nodes[k] + eps);
                rule.w.push_back(r1.weights[i] * r2.weights[j] * rn.weights[k]);
            }
        }
    }
    return rule;
}

std::vector<double> lp_norms(const SingularTestFn& fn, std::span<const double> ps, bool gradient, int order) {
    for (double p : ps) IDLAB_REQUIRE(p >= 1.0, "lp_norms: need p >= 1");
    const SingularVolumeRule rule = build_singular_rule(fn, order);
    const auto& k = kernels::active();
    std::vector<double> lam(rule.size()), gn(rule.size());
    if (fn.dim() == 2) {
        k.flat_lambda2(rule.yt1.data(), rule.yn.data(), lam.data(), gn.data(), rule.size());
    } else {
        k.flat_lambda3(rule.yt1.data(), rule.yt2.data(), rule.yn.data(), lam.data(), gn.data(), rule.size());
    }
    const std::vector<double>& v = gradient ? gn : lam;
    std::vector<double> out;
    out.reserve(ps.size());
    for (double p : ps) out.push_back(std::pow(k.weighted_abs_pow(rule.w.data(), v.data(), p, rule.size()), 1.0 / p));
    return out;
}

double lp_norm_lambda(const SingularTestFn& fn, double p) {
    const double ps[] = {p};
    return lp_norms(fn, ps, false).front();
}

double lp_norm_grad_lambda(const SingularTestFn& fn, double p) {
    const double ps[] = {p};
    return lp_norms(fn, ps, true).front();
}

GammaIntegral dn_lambda_gamma_integral(const SingularTestFn& fn, int order) {
    const double eps = fn.eps();
    const Point xb = fn.xbar();
    GammaIntegral out;
    out.min_value = std::numeric_limits<double>::infinity();
    if (fn.dim() == 2) {
        const Rule1D r = composite_gauss(dyadic_breakpoints(xb.x - eps, xb.x + eps, xb.x, eps, 6), order);
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            const double v = fn.normal_derivative({r.nodes[i], 0.0, 0.0});
            out.integral += r.weights[i] * v;
            out.min_value = std::min(out.min_value, v);
        }
        out.n_nodes = r.nodes.size();
        return out;
    }
    // Polar coordinates about x̄ on the bottom face; uniform angles are
    // spectrally accurate for the periodic direction.
    const Rule1D r = composite_gauss(dyadic_breakpoints(0.0, eps, 0.0, eps, 6), order);
    constexpr int n_theta = 32;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        double ring = 0.0;
        for (int a = 0; a < n_theta; ++a) {
            const double th = 2.0 * kPi * a / n_theta;
            const Point x{xb.x + r.nodes[i] * std::cos(th), xb.y + r.nodes[i] * std::sin(th), 0.0};
            const double v = fn.normal_derivative(x);
            ring += v;
            out.min_value = std::min(out.min_value, v);
        }
        out.integral += r.weights[i] * r.nodes[i] * ring * (2.0 * kPi / n_theta);
    }
    out.n_nodes = r.nodes.size() * n_theta;
    return out;
}

FarFieldBound far_field_bound_check(const SingularTestFn& fn, double eps0, std::span<const Point> points) {
    const int d = fn.dim();
    FarFieldBound out;
    const double rmin = 0.25 * eps0;
    if (d == 2) {
        out.ceiling_lambda = 1.0 / (2.0 * kPi * rmin);
        out.ceiling_grad = 1.0 / (2.0 * kPi * rmin * rmin);
    } else {
        out.ceiling_lambda = 1.0 / (4.0 * kPi * rmin * rmin);
        out.ceiling_grad = 2.0 / (4.0 * kPi * rmin * rmin * rmin);
    }
    for (const Point& p : points) {
        if (norm(p - fn.xbar()) < 0.5 * eps0) continue;
        out.max_lambda = std::max(out.max_lambda, std::abs(fn.value(p)));
        out.max_grad = std::max(out.max_grad, norm(fn.grad(p)));
        ++out.n_points;
    }
    return out;
}

FarFieldBound far_field_bound_check(const SingularTestFn& fn, const Grid& grid) {
    std::vector<Point> pts(grid.n_nodes());
    for (std::size_t k = 0; k < pts.size(); ++k) pts[k] = grid.point(k);
    return far_field_bound_check(fn, grid.domain().eps0, pts);
}

std::vector<Point> lattice_points(int dim, int n) {
    IDLAB_REQUIRE(n >= 1 && (dim == 2 || dim == 3), "lattice_points: need n >= 1 and dim in {2, 3}");
    std::vector<Point> pts;
    const double h = 1.0 / n;
    const int nz = dim == 3 ? n : 0;
    for (int k = 0; k <= nz; ++k) {
        for (int j = 0; j <= n; ++j) {
            for (int i = 0; i <= n; ++i) {
                pts.push_back(dim == 2 ? Point{i * h, j * h, 0.0} : Point{i * h, j * h, k * h});
            }
        }
    }
    return pts;
}

} // namespace idlab
