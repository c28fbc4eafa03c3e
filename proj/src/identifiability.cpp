#include "idlab/identifiability.hpp"

#include "idlab/error.hpp"
#include "idlab/log.hpp"
#include "idlab/parallel.hpp"
#include "idlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace idlab {

double antiderivative_A(const CoefficientSet& coeffs, double t, double g, double g_lower) {
    if (g == g_lower) return 0.0;
    std::vector<double> breaks = coeffs.a_kinks;
    breaks.push_back(coeffs.range.lo);
    breaks.push_back(coeffs.range.hi);
    return integrate_adaptive([&](double u) { return coeffs.eval_a(t, u); }, g_lower, g, breaks, 1e-12);
}

TimeWindow Disagreement::window(double T) const {
    const double len = rect.t2 - rect.t1;
    TimeWindow w;
    w.t1 = rect.t1 > 0.0 ? rect.t1 : rect.t1 + 0.25 * len;
    w.t2 = rect.t2 < T ? rect.t2 : rect.t2 - 0.25 * len;
    return w;
}

std::optional<Disagreement> locate_disagreement(const CoefficientSet& a1, const CoefficientSet& a2,
                                                const Domain& domain, int n, double atol) {
    IDLAB_REQUIRE(n >= 2, "locate_disagreement: need n >= 2");
    const double lo = std::max(a1.range.lo, a2.range.lo), hi = std::min(a1.range.hi, a2.range.hi);
    IDLAB_REQUIRE(lo < hi, "locate_disagreement: coefficient ranges do not overlap");
    const double T = domain.T;
    const auto N = static_cast<std::size_t>(n);
    auto tc = [&](std::size_t i) { return T * (static_cast<double>(i) + 0.5) / n; };
    auto uc = [&](std::size_t j) { return lo + (hi - lo) * (static_cast<double>(j) + 0.5) / n; };

    std::vector<double> diff(N * N);
    std::size_t arg = 0;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            const double d = a1.eval_a(tc(i), uc(j)) - a2.eval_a(tc(i), uc(j));
            diff[i * N + j] = d;
            if (std::abs(d) > std::abs(diff[arg])) arg = i * N + j;
        }
    }
    const double dmax = std::abs(diff[arg]);
    if (dmax <= atol) return std::nullopt;

    Disagreement out;
    out.orientation = diff[arg] > 0.0 ? 1 : -1;
    out.max_diff = dmax;
    out.eta = 0.5 * dmax;
    const std::size_t wi = arg / N, wj = arg % N;
    out.t_witness = tc(wi);
    out.g_witness = uc(wj);
    auto ok = [&](std::size_t i, std::size_t j) { return out.orientation * diff[i * N + j] >= out.eta; };

    // Maximal run through column wj in each row; rows where (i, wj) fails stop the scan.
    std::vector<std::size_t> L(N), R(N);
    for (std::size_t i = 0; i < N; ++i) {
        if (!ok(i, wj)) continue;
        std::size_t l = wj, r = wj;
        while (l > 0 && ok(i, l - 1)) --l;
        while (r + 1 < N && ok(i, r + 1)) ++r;
        L[i] = l;
        R[i] = r;
    }
    std::vector<std::size_t> up_rows, down_rows;
    std::vector<std::size_t> upL, upR, downL, downR;
    for (std::size_t i = wi, l = 0, r = N - 1;; --i) {
        if (!ok(i, wj)) break;
        l = std::max(l, L[i]);
        r = std::min(r, R[i]);
        up_rows.push_back(i);
        upL.push_back(l);
        upR.push_back(r);
        if (i == 0) break;
    }
    for (std::size_t i = wi, l = 0, r = N - 1; i < N; ++i) {
        if (!ok(i, wj)) break;
        l = std::max(l, L[i]);
        r = std::min(r, R[i]);
        down_rows.push_back(i);
        downL.push_back(l);
        downR.push_back(r);
    }
    std::size_t best = 0, b_r1 = wi, b_r2 = wi, b_l = wj, b_r = wj;
    for (std::size_t a = 0; a < up_rows.size(); ++a) {
        for (std::size_t b = 0; b < down_rows.size(); ++b) {
            const std::size_t l = std::max(upL[a], downL[b]), r = std::min(upR[a], downR[b]);
            const std::size_t area = (down_rows[b] - up_rows[a] + 1) * (r - l + 1);
            if (area > best) {
                best = area;
                b_r1 = up_rows[a];
                b_r2 = down_rows[b];
                b_l = l;
                b_r = r;
            }
        }
    }
    out.rect.t1 = T * static_cast<double>(b_r1) / n;
    out.rect.t2 = T * static_cast<double>(b_r2 + 1) / n;
    out.rect.g1 = lo + (hi - lo) * static_cast<double>(b_l) / n;
    out.rect.g2 = lo + (hi - lo) * static_cast<double>(b_r + 1) / n;
    return out;
}

void check_harmonic(const SpaceTimeFn& phi, const Domain& domain, double pole_scale) {
    std::vector<Point> pts;
    for (int j = 1; j <= 9; ++j) {
        for (int i = 1; i <= 9; ++i) pts.push_back({0.1 * i, 0.1 * j, 0.0});
    }
    const Point pole{domain.xbar.x, -pole_scale, 0.0};
    if (pole_scale > 0.0) {
        for (double s : {-1.0, 0.0, 1.0}) {
            for (double d : {0.5, 1.0, 2.0}) pts.push_back({domain.xbar.x + s * pole_scale, d * pole_scale, 0.0});
        }
    }
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    for (const auto& term : phi.terms()) {
        const auto& f = term.space;
        for (const Point& x : pts) {
            const double r = pole_scale > 0.0 ? norm(x - pole) : 1.0;
            const double delta = 0.05 * std::min(r, 1.0);
            auto lap = [&](double h, double& mag) {
                const double c = f(x), e = f({x.x + h, x.y, 0.0}), w = f({x.x - h, x.y, 0.0});
                const double nn = f({x.x, x.y + h, 0.0}), s = f({x.x, x.y - h, 0.0});
                mag = std::max({std::abs(c), std::abs(e), std::abs(w), std::abs(nn), std::abs(s)});
                return (e + w + nn + s - 4.0 * c) / (h * h);
            };
            double m1 = 0.0, m2 = 0.0;
            const double l1 = lap(delta, m1), l2 = lap(0.5 * delta, m2);
            const double floor = 1e3 * kEps * m2 / (0.25 * delta * delta);
            if (std::abs(l2) > std::max(0.5 * std::abs(l1), floor)) {
                throw PreconditionError("test function '" + term.label + "' is not harmonic in space (Laplacian " +
                                        std::to_string(l2) + " at (" + std::to_string(x.x) + ", " +
                                        std::to_string(x.y) + "))");
            }
        }
    }
}

double boundary_antiderivative_integral(const CoefficientSet& c1, const CoefficientSet& c2, const SpaceTimeFn& phi,
                                        const Domain& domain, const IdentityOptions& options) {
    IDLAB_REQUIRE(static_cast<bool>(options.g), "evaluate_identity: Dirichlet data g is required");
    IDLAB_REQUIRE(phi.has_gradient(), "evaluate_identity: test function needs an analytic gradient");
    const double T = domain.T;
    std::vector<double> tb;
    for (int k = 0; k <= 16; ++k) tb.push_back(T * k / 16.0);
    for (double t : options.time_breaks) {
        if (t > 0.0 && t < T) tb.push_back(t);
    }
    std::sort(tb.begin(), tb.end());
    tb.erase(std::unique(tb.begin(), tb.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }), tb.end());
    const Rule1D tr = composite_gauss(tb, 6);

    std::vector<double> uniform;
    for (int k = 0; k <= 16; ++k) uniform.push_back(k / 16.0);
    const double xb = domain.xbar.x, e = options.focus_scale;
    std::vector<double> bottom_breaks = uniform;
    if (e > 0.0) {
        const double extra_pts[] = {xb - e, xb - 0.5 * e, xb + 0.5 * e, xb + e};
        std::vector<double> extra(std::begin(extra_pts), std::end(extra_pts));
        extra.insert(extra.end(), uniform.begin(), uniform.end());
        bottom_breaks = dyadic_breakpoints(0.0, 1.0, xb, e, 3, extra);
    }
    struct EdgeDef {
        Point origin, dir, normal;
        const std::vector<double>* breaks;
    };
    const EdgeDef edges[] = {{{0, 0, 0}, {1, 0, 0}, {0, -1, 0}, &bottom_breaks},
                             {{1, 0, 0}, {0, 1, 0}, {1, 0, 0}, &uniform},
                             {{0, 1, 0}, {1, 0, 0}, {0, 1, 0}, &uniform},
                             {{0, 0, 0}, {0, 1, 0}, {-1, 0, 0}, &uniform}};
    double total = 0.0;
    for (const EdgeDef& ed : edges) {
        const Rule1D sr = composite_gauss(*ed.breaks, 6);
        double edge_sum = 0.0;
        for (std::size_t i = 0; i < sr.nodes.size(); ++i) {
            const Point x = ed.origin + sr.nodes[i] * ed.dir;
            double acc = 0.0;
            for (std::size_t q = 0; q < tr.nodes.size(); ++q) {
                const double t = tr.nodes[q];
                const double g = options.g(x, t);
                if (g == options.g_lower) continue;
                const double dA = antiderivative_A(c1, t, g, options.g_lower) - antiderivative_A(c2, t, g, options.g_lower);
                if (dA == 0.0) continue;
                acc += tr.weights[q] * dA * dot(phi.grad(x, t), ed.normal);
            }
            edge_sum += sr.weights[i] * acc;
        }
        total += edge_sum;
    }
    return total;
}

IdentityBreakdown evaluate_identity(const FluxFunctional& j1, const FluxFunctional& j2, const CoefficientSet& c1,
                                    const CoefficientSet& c2, const SpaceTimeFn& phi, const IdentityOptions& options) {
    const Domain& domain = j1.grid().domain();
    if (options.check_harmonic) check_harmonic(phi, domain, options.focus_scale);
    const PairingParts p1 = j1.parts(phi), p2 = j2.parts(phi);
    IdentityBreakdown b;
    b.flux = p1.total() - p2.total();
    b.storage = p1.storage - p2.storage;
    b.drift = p1.drift - p2.drift;
    b.reaction = p1.reaction - p2.reaction;
    b.rhs_total = b.flux - b.storage - b.drift - b.reaction;
    b.lhs = boundary_antiderivative_integral(c1, c2, phi, domain, options);
    b.residual = b.lhs - b.rhs_total;
    return b;
}

IdentityBreakdown evaluate_identity(const FieldST& u1, const FieldST& u2, const CoefficientSet& c1,
                                    const CoefficientSet& c2, const SpaceTimeFn& phi, const IdentityOptions& options) {
    const FluxFunctional j1(u1, c1), j2(u2, c2);
    return evaluate_identity(j1, j2, c1, c2, phi, options);
}

double principal_term(const CoefficientSet& c1, const CoefficientSet& c2, const DirichletDatum& datum,
                      const SingularTestFn& fn, double g_lower) {
    const double eps = datum.eps(), xb = fn.xbar().x;
    const TimeWindow w = datum.window();
    const double extra[] = {xb - 0.5 * eps, xb + 0.5 * eps};
    const Rule1D sr = composite_gauss(dyadic_breakpoints(xb - eps, xb + eps, xb, eps, 3, extra), 8);
    std::vector<double> tb;
    for (int k = 0; k <= 8; ++k) tb.push_back(w.t1 + (w.t2 - w.t1) * k / 8.0);
    const Rule1D tr = composite_gauss(tb, 8);
    const CutoffPair& cut = datum.cutoffs();
    double total = 0.0;
    for (std::size_t i = 0; i < sr.nodes.size(); ++i) {
        const Point x{sr.nodes[i], 0.0, 0.0};
        const double dn = fn.normal_derivative(x);
        double acc = 0.0;
        for (std::size_t q = 0; q < tr.nodes.size(); ++q) {
            const double t = tr.nodes[q];
            const double g = datum.value(x, t);
            const double dA = antiderivative_A(c1, t, g, g_lower) - antiderivative_A(c2, t, g, g_lower);
            acc += tr.weights[q] * dA * cut.temporal(t);
        }
        total += sr.weights[i] * acc * dn;
    }
    return total;
}

IdentityStudy identity_refinement_study(const CoefficientSet& c1, const CoefficientSet& c2, const Domain& domain,
                                        const IdentityStudyOptions& o) {
    IDLAB_REQUIRE(o.cells.size() >= 2, "identity_refinement_study: need at least two grids");
    const ValueRange range{std::max(c1.range.lo, c2.range.lo), std::min(c1.range.hi, c2.range.hi)};
    const TimeWindow window{0.25 * domain.T, 0.75 * domain.T};
    const double eps = o.eps_factor * domain.eps0;
    const DirichletDatum datum = make_dirichlet_datum(domain, eps, range.lo, range.hi, window, range);
    const SingularTestFn fn(domain, eps);
    const SpaceTimeFn phi = make_test_function(fn, CutoffPair(domain.xbar, eps, window));
    IdentityOptions io;
    io.g = [datum](Point x, double t) { return datum.value(x, t); };
    io.g_lower = range.lo;
    io.focus_scale = eps;
    io.time_breaks = {window.t1, window.t2};

    IdentityStudy out;
    const double tau0 = (window.t2 - window.t1) / 64.0;
    std::vector<double> hs, rel;
    for (int n : o.cells) {
        auto grid = std::make_shared<const Grid>(build_grid(domain, n));
        const int steps = static_cast<int>(std::lround(domain.T / tau0)) * n / o.cells.front();
        IdentityStudyRow row;
        row.h = 1.0 / n;
        row.tau = domain.T / steps;
        ProblemSpec p1 = make_problem(grid, c1, datum, row.tau, o.u0_1);
        ProblemSpec p2 = make_problem(grid, c2, datum, row.tau, o.u0_2);
        p1.controls = p2.controls = o.controls;
        const FieldST f1 = solve_parabolic(p1), f2 = solve_parabolic(p2);
        row.terms = evaluate_identity(f1, f2, c1, c2, phi, io);
        row.relative = std::abs(row.terms.residual) / std::max(std::abs(row.terms.lhs), 1.0);
        out.C = std::max(out.C, row.relative / (row.h + row.tau));
        hs.push_back(row.h + row.tau);
        rel.push_back(row.relative);
        out.rows.push_back(row);
    }
    out.order = loglog_slope(hs, rel);
    return out;
}

std::string to_string(Verdict v) { return v == Verdict::Distinguishable ? "DISTINGUISHABLE" : "NOT-DETECTED"; }

namespace {

ScalingRow sweep_row(const CoefficientSet& s1, const CoefficientSet& s2, const CoefficientSet& c1,
                     const CoefficientSet& c2, const Domain& domain, const Rect& rect, TimeWindow window, double eps,
                     const SweepOptions& o, bool solve) {
    ScalingRow row;
    row.eps = eps;
    const DirichletDatum datum =
        make_dirichlet_datum(domain, eps, rect.g1, rect.g2, window, ValueRange{rect.g1, rect.g2});
    const SingularTestFn fn(domain, eps);
    row.principal = principal_term(c1, c2, datum, fn, rect.g1);
    if (!solve) {
        row.status = "not solved";
        return row;
    }
    try {
        auto grid = std::make_shared<const Grid>(build_grid_for_scale(domain, eps, o.h_coarse));
        const double T = domain.T;
        const int N = static_cast<int>(std::ceil(o.tau_divisions * T / (window.t2 - window.t1) - 1e-9));
        const double tau = T / N;
        row.h_min = grid->h_min();
        row.tau = tau;
        row.n_nodes = grid->n_nodes();

        ProblemSpec p1 = make_problem(grid, s1, datum, tau, o.u0_1);
        ProblemSpec p2 = make_problem(grid, s2, datum, tau, o.u0_2);
        p1.controls = p2.controls = o.controls;
        p1.linear = p2.linear = o.linear;
        const FieldST f1 = solve_parabolic(p1), f2 = solve_parabolic(p2);
        const FluxFunctional j1(f1, s1), j2(f2, s2);

        const CutoffPair cut(domain.xbar, eps, window);
        const SpaceTimeFn phi = make_test_function(fn, cut);
        IdentityOptions io;
        io.g = [datum](Point x, double t) { return datum.value(x, t); };
        io.g_lower = rect.g1;
        io.focus_scale = eps;
        io.time_breaks = {window.t1, window.t2};
        const IdentityBreakdown b = evaluate_identity(j1, j2, s1, s2, phi, io);
        row.lhs = b.lhs;
        row.flux = b.flux;
        row.storage = b.storage;
        row.drift = b.drift;
        row.reaction = b.reaction;
        row.residual = b.residual;
        row.lower_sum = std::abs(b.storage) + std::abs(b.drift) + std::abs(b.reaction);

        // Near/far split of the flux pairing with the eps0 cutoff.
        const CutoffPair far_cut(domain.xbar, domain.eps0, window);
        SeparableTerm near_term = phi.terms().front();
        near_term.space = [fn, far_cut](Point x) { return fn.value(x) * far_cut.spatial(x); };
        near_term.space_grad = nullptr;
        SeparableTerm far_term = phi.terms().front();
        far_term.space = [fn, far_cut](Point x) { return fn.value(x) * (1.0 - far_cut.spatial(x)); };
        far_term.space_grad = nullptr;
        row.flux_near = j1.pair(SpaceTimeFn(near_term)) - j2.pair(SpaceTimeFn(near_term));
        row.flux_far = j1.pair(SpaceTimeFn(far_term)) - j2.pair(SpaceTimeFn(far_term));

        const double CA = std::max(s1.C_A, s2.C_A);
        const double CU = std::max(f1.reported_bound, f2.reported_bound);
        row.flux_bound = CA * (3.0 + CU) * h1_h1_norm(phi, *grid);
        row.solved = true;
    } catch (const std::exception& ex) {
        row.status = std::string("failed: ") + ex.what();
        logger().error("sweep at eps = {}: {}", eps, ex.what());
    }
    return row;
}

} // namespace

ScalingReport discrimination_sweep(const CoefficientSet& c1, const CoefficientSet& c2, const Domain& domain,
                                   const SweepOptions& o) {
    domain.validate();
    IDLAB_REQUIRE(domain.dim == 2, "discrimination_sweep: forward solves are two-dimensional");
    IDLAB_REQUIRE(!o.eps_factors.empty(), "discrimination_sweep: empty eps list");
    for (double f : o.eps_factors) IDLAB_REQUIRE(f > 0.0 && f <= 1.0, "discrimination_sweep: eps must lie in (0, eps0]");

    ScalingReport rep;
    rep.dim = domain.dim;
    rep.predicted_slope = 0.5 * (1.0 - domain.dim);
    rep.disagreement = locate_disagreement(c1, c2, domain);

    Rect rect;
    TimeWindow window{0.25 * domain.T, 0.75 * domain.T};
    bool solve = true;
    if (rep.disagreement) {
        rect = rep.disagreement->rect;
        window = rep.disagreement->window(domain.T);
    } else {
        rect = {0.0, domain.T, std::max(c1.range.lo, c2.range.lo), std::min(c1.range.hi, c2.range.hi)};
        rep.note = "no disagreement between a1 and a2 located";
        solve = o.solve_when_undetected;
    }
    const CoefficientSet s1 = o.apply_lower_order ? with_lower_order(c1, o.lower1) : c1;
    const CoefficientSet s2 = o.apply_lower_order ? with_lower_order(c2, o.lower2) : c2;

    rep.rows.resize(o.eps_factors.size());
    parallel_for(o.eps_factors.size(), o.threads, [&](std::size_t i) {
        rep.rows[i] = sweep_row(s1, s2, c1, c2, domain, rect, window, o.eps_factors[i] * domain.eps0, o, solve);
    });

    std::vector<double> eps, principal, flux_eps, flux, ratio;
    std::size_t smallest = 0;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const ScalingRow& r = rep.rows[i];
        if (r.eps < rep.rows[smallest].eps) smallest = i;
        eps.push_back(r.eps);
        principal.push_back(std::abs(r.principal));
        if (r.solved) {
            flux_eps.push_back(r.eps);
            flux.push_back(std::abs(r.flux));
            ratio.push_back(r.lower_sum / std::abs(std::log(r.eps)));
        }
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rep.principal_slope = eps.size() >= 2 ? loglog_slope(eps, principal) : nan;
    rep.flux_slope = flux.size() >= 2 ? loglog_slope(flux_eps, flux) : nan;
    if (!ratio.empty()) {
        const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
        rep.lower_ratio_spread = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
        rep.C2 = *hi;
    } else {
        rep.lower_ratio_spread = nan;
        rep.C2 = nan;
    }
    rep.C1 = std::numeric_limits<double>::infinity();
    for (const ScalingRow& r : rep.rows) {
        rep.C1 = std::min(rep.C1, std::abs(r.principal) * std::pow(r.eps, 0.5 * (domain.dim - 1.0)));
    }
    const ScalingRow& last = rep.rows[smallest];
    rep.separation = last.solved ? (last.lower_sum > 0.0 ? std::abs(last.principal) / last.lower_sum
                                                         : std::numeric_limits<double>::infinity())
                                 : nan;
    const bool slope_ok = std::abs(rep.principal_slope - rep.predicted_slope) <= 0.1;
    const bool separated = last.solved && rep.separation >= 4.0;
    rep.verdict = rep.disagreement && slope_ok && separated ? Verdict::Distinguishable : Verdict::NotDetected;
    return rep;
}

std::vector<DirichletDatum> dirichlet_battery(const Domain& domain, std::size_t size, ValueRange range,
                                              TimeWindow window) {
    std::vector<DirichletDatum> out;
    for (std::size_t k = 0; k < size; ++k) {
        const double eps = std::ldexp(domain.eps0, -static_cast<int>(k / 4));
        const double g1 = range.lo + 0.25 * static_cast<double>(k % 4) * (range.hi - range.lo);
        out.push_back(make_dirichlet_datum(domain, eps, g1, range.hi, window, range));
    }
    return out;
}

namespace {

void require_same_lower_order(const CoefficientSet& c1, const CoefficientSet& c2, const Domain& domain,
                              bool require_identical_a) {
    const double lo = std::max(c1.range.lo, c2.range.lo), hi = std::min(c1.range.hi, c2.range.hi);
    auto same = [](double a, double b) { return std::abs(a - b) <= 1e-14 * std::max({1.0, std::abs(a), std::abs(b)}); };
    for (int it = 0; it <= 4; ++it) {
        const double t = domain.T * it / 4.0;
        for (int iu = 0; iu <= 4; ++iu) {
            const double u = lo + (hi - lo) * iu / 4.0;
            IDLAB_REQUIRE(same(c1.eval_d(t, u), c2.eval_d(t, u)), "reverse_check: storage terms differ");
            if (require_identical_a) IDLAB_REQUIRE(same(c1.eval_a(t, u), c2.eval_a(t, u)), "reverse_check: a differs");
            for (int ix = 0; ix <= 4; ++ix) {
                for (int iy = 0; iy <= 4; ++iy) {
                    const Point x{ix / 4.0, iy / 4.0, 0.0};
                    const Point gu{0.3, -0.2, 0.0};
                    const Point b1 = c1.eval_b(x, t, u), b2 = c2.eval_b(x, t, u);
                    IDLAB_REQUIRE(same(b1.x, b2.x) && same(b1.y, b2.y), "reverse_check: drift terms differ");
                    IDLAB_REQUIRE(same(c1.eval_c(x, t, u, gu), c2.eval_c(x, t, u, gu)),
                                  "reverse_check: reaction terms differ");
                }
            }
        }
    }
}

} // namespace

ReverseCheckReport reverse_check(const CoefficientSet& c1, const CoefficientSet& c2, const Domain& domain,
                                 const std::function<double(Point)>& u0, const ReverseCheckOptions& o,
                                 bool require_identical_a) {
    IDLAB_REQUIRE(o.mode != Mode::Coupled, "reverse_check: parabolic or elliptic mode only");
    require_same_lower_order(c1, c2, domain, require_identical_a);
    const ValueRange range{std::max(c1.range.lo, c2.range.lo), std::min(c1.range.hi, c2.range.hi)};
    const TimeWindow window{0.25 * domain.T, 0.75 * domain.T};
    const auto data = dirichlet_battery(domain, o.battery_size, range, window);
    const auto phis = gamma_m_battery(domain, o.phi_battery_size, o.mode);
    auto grid = std::make_shared<const Grid>(build_grid(domain, o.n_cells));

    ReverseCheckReport rep;
    rep.mode = o.mode;
    rep.threshold = 10.0 * o.controls.tol;
    for (const DirichletDatum& datum : data) {
        ProblemSpec p1 = make_problem(grid, c1, datum, o.tau, u0);
        p1.controls = o.controls;
        p1.mode = o.mode;
        if (o.mode == Mode::Elliptic) {
            const double tm = 0.5 * (window.t1 + window.t2);
            p1.g = [datum, tm](Point x, double) { return datum.value(x, tm); };
        }
        ProblemSpec p2 = p1;
        p2.coeffs = c2;
        const bool ell = o.mode == Mode::Elliptic;
        const FieldST f1 = ell ? solve_elliptic(p1) : solve_parabolic(p1);
        const FieldST f2 = ell ? solve_elliptic(p2) : solve_parabolic(p2);
        const FluxFunctional j1(f1, c1, o.mode), j2(f2, c2, o.mode);
        rep.gaps.push_back(flux_gap_on_gamma_m(j1, j2, phis).gap);
    }
    rep.max_gap = *std::max_element(rep.gaps.begin(), rep.gaps.end());
    rep.pass = rep.max_gap <= rep.threshold;
    return rep;
}

} // namespace idlab
