// Property tests over randomly generated cases. Each generator draws from a
// fixed-seed engine so that failures reproduce; the failing case is printed.

#include "idlab/flux.hpp"
#include "idlab/identifiability.hpp"
#include "idlab/quadrature.hpp"
#include "idlab/io.hpp"
#include "idlab/reconstruction.hpp"
#include "idlab/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace idlab;

namespace {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    /// Any finite double, including subnormals and extreme exponents.
    double any_double() {
        const double m = uniform(-1.0, 1.0);
        return std::ldexp(m, integer(-1070, 1020));
    }
    /// Strictly positive knot values with bounded ratio.
    std::vector<double> knots(std::size_t n, double lo, double hi) {
        std::vector<double> v(n);
        for (double& x : v) x = uniform(lo, hi);
        return v;
    }

private:
    std::mt19937_64 rng_;
};

constexpr int kCases = 200;

} // namespace

TEST(Property, NumberFormattingRoundTrips) {
    Gen g(1);
    for (int i = 0; i < kCases * 10; ++i) {
        const double v = g.any_double();
        ASSERT_EQ(std::strtod(format_number(v).c_str(), nullptr), v) << format_number(v);
    }
}

TEST(Property, DatumStaysInBoundsAndEqualsG1OffSupport) {
    Gen g(2);
    const Domain d = default_domain(2);
    for (int i = 0; i < kCases; ++i) {
        const double eps = g.log_uniform(1e-3, d.eps0);
        const double g1 = g.uniform(-1.0, 1.0), g2 = g1 + g.uniform(0.01, 2.0);
        const double t1 = g.uniform(0.0, 0.5), t2 = t1 + g.uniform(0.05, 0.5);
        const DirichletDatum datum = make_dirichlet_datum(d, eps, g1, g2, {t1, t2});
        for (int j = 0; j < 20; ++j) {
            const Point x{g.uniform(0.0, 1.0), 0.0, 0.0};
            const double t = g.uniform(0.0, 1.0);
            const double v = datum.value(x, t);
            ASSERT_GE(v, g1) << "eps=" << eps << " x=" << x.x << " t=" << t;
            ASSERT_LE(v, g2) << "eps=" << eps << " x=" << x.x << " t=" << t;
            if (std::abs(x.x - d.xbar.x) >= eps || t <= t1 || t >= t2) ASSERT_EQ(v, g1);
        }
    }
}

TEST(Property, NormalDerivativeOfLambdaIsPositiveOnFace) {
    Gen g(3);
    for (int i = 0; i < kCases; ++i) {
        const int dim = g.integer(2, 3);
        const Domain d = default_domain(dim);
        const SingularTestFn fn(d, g.log_uniform(1e-4, d.eps0));
        // Positivity is claimed only on the face patch inside B_eps(xbar).
        const double r = fn.eps() * g.uniform(0.0, 0.99), theta = g.uniform(0.0, 2.0 * M_PI);
        const Point x{d.xbar.x + (dim == 3 ? r * std::cos(theta) : (g.integer(0, 1) ? r : -r)),
                      dim == 3 ? d.xbar.y + r * std::sin(theta) : 0.0, 0.0};
        ASSERT_GT(fn.normal_derivative(x), 0.0) << "dim=" << dim << " eps=" << fn.eps();
    }
}

TEST(Property, SpatialCutoffIsLipschitzBump) {
    Gen g(4);
    for (int i = 0; i < kCases; ++i) {
        const double eps = g.log_uniform(1e-3, 0.25);
        const CutoffPair c({0.5, 0.0, 0.0}, eps, {0.25, 0.75});
        const Point x{g.uniform(0.0, 1.0), 0.0, 0.0}, y{g.uniform(0.0, 1.0), 0.0, 0.0};
        const double cx = c.spatial(x), cy = c.spatial(y);
        ASSERT_GE(cx, 0.0);
        ASSERT_LE(cx, 1.0);
        ASSERT_LE(std::abs(cx - cy), 2.0 / eps * std::abs(x.x - y.x) + 1e-12);
    }
}

TEST(Property, ParamAntiderivativeMatchesQuadrature) {
    Gen g(5);
    for (int i = 0; i < kCases; ++i) {
        ParamA a;
        a.values = g.knots(static_cast<std::size_t>(g.integer(2, 9)), 0.1, 3.0);
        const double u = g.uniform(-0.5, 1.5);
        const auto knots = a.u_knots();
        const double q = integrate_adaptive([&](double s) { return a.eval(0.0, s); }, 0.0, u, knots);
        ASSERT_NEAR(a.antiderivative(0.0, u), q, 1e-11) << "u=" << u << " n=" << a.values.size();
    }
}

TEST(Property, KirchhoffRoundTripOnRandomTables) {
    Gen g(6);
    for (int i = 0; i < kCases; ++i) {
        ParamA a;
        a.values = g.knots(static_cast<std::size_t>(g.integer(2, 8)), 0.05, 5.0);
        const double u = g.uniform(-0.2, 1.2);
        ASSERT_NEAR(inverse_kirchhoff(a, 0.0, a.antiderivative(0.0, u)), u, 1e-10)
            << "knots=" << a.values.size() << " u=" << u;
    }
}

TEST(Property, DisagreementRectangleHoldsTheGap) {
    Gen g(7);
    const Domain d = default_domain(2);
    for (int i = 0; i < 40; ++i) {
        const double alpha = g.uniform(0.5, 2.0), beta = g.uniform(-0.4, 1.0);
        const double c0 = g.uniform(0.5, 2.0);
        const CoefficientSet a1 = affine_preset(alpha, beta), a2 = constant_preset(c0);
        const auto dis = locate_disagreement(a1, a2, d, 64);
        if (!dis) continue;
        const Rect r = dis->rect;
        for (int j = 0; j < 20; ++j) {
            const double t = g.uniform(r.t1, r.t2), u = g.uniform(r.g1, r.g2);
            // Edges sit on cell edges while the gap is sampled at cell centres.
            const double slack = std::abs(beta) * (r.g2 - r.g1 > 0.0 ? 1.0 / 64.0 : 0.0) + 1e-12;
            ASSERT_GE(dis->orientation * (a1.eval_a(t, u) - a2.eval_a(t, u)), dis->eta - slack)
                << "alpha=" << alpha << " beta=" << beta << " c0=" << c0;
        }
    }
}

TEST(Property, ConstantStatesArePreserved) {
    Gen g(8);
    for (int i = 0; i < 12; ++i) {
        const double alpha = g.uniform(0.5, 2.0), beta = g.uniform(0.0, 1.0), v = g.uniform(0.0, 1.0);
        ProblemSpec p;
        p.grid = std::make_shared<const Grid>(build_grid(default_domain(2), g.integer(8, 16)));
        p.coeffs = affine_preset(alpha, beta);
        p.g = [v](Point, double) { return v; };
        p.u0 = [v](Point) { return v; };
        p.tau = 1.0 / g.integer(4, 16);
        const FieldST u = solve_parabolic(p);
        for (double x : u.data()) ASSERT_NEAR(x, v, 1e-12) << "alpha=" << alpha << " beta=" << beta << " v=" << v;
    }
}

TEST(Property, FluxPairingIsLinear) {
    Gen g(9);
    const Domain d = default_domain(2);
    auto grid = std::make_shared<const Grid>(build_grid(d, 12));
    const CoefficientSet c = affine_preset(1.0, 0.5);
    const DirichletDatum datum = make_dirichlet_datum(d, 0.25, 0.0, 1.0, {0.25, 0.75});
    const FieldST u = solve_parabolic(make_problem(grid, c, datum, 1.0 / 128.0));
    const FluxFunctional j(u, c);
    const auto b = gamma_m_battery(d, 6);
    for (int i = 0; i < 50; ++i) {
        const std::size_t m1 = static_cast<std::size_t>(g.integer(0, 5)), m2 = static_cast<std::size_t>(g.integer(0, 5));
        const double s = g.uniform(-3.0, 3.0), r = g.uniform(-3.0, 3.0);
        const double lhs = j.pair(s * b[m1].phi + r * b[m2].phi);
        const double rhs = s * j.pair(b[m1].phi) + r * j.pair(b[m2].phi);
        ASSERT_NEAR(lhs, rhs, 1e-12 * (1.0 + std::abs(rhs))) << "m1=" << m1 << " m2=" << m2;
    }
}
