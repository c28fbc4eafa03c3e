#include "idlab/quadrature.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <vector>

using namespace idlab;

TEST(Quadrature, GaussLegendreExactForPolynomials) {
    for (int n : {1, 2, 4, 8}) {
        const Rule1D& r = gauss_legendre(n);
        for (int p = 0; p < 2 * n; ++p) {
            double s = 0.0;
            for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], p);
            const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
            EXPECT_NEAR(s, exact, 1e-14) << "n=" << n << " p=" << p;
        }
    }
}

TEST(Quadrature, CompositeGaussHandlesKinkAtBreakpoint) {
    const std::vector<double> br{0.0, 0.3, 1.0};
    const Rule1D r = composite_gauss(br, 3);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::abs(r.nodes[i] - 0.3);
    EXPECT_NEAR(s, 0.5 * (0.09 + 0.49), 1e-15);
}

TEST(Quadrature, AdaptiveIntegratesKinkAndSmallValues) {
    EXPECT_NEAR(integrate_adaptive([](double x) { return std::abs(x - 0.3137); }, 0.0, 1.0),
                0.5 * (0.3137 * 0.3137 + 0.6863 * 0.6863), 1e-12);
    // Relative accuracy must survive tiny integrands.
    const double v = integrate_adaptive([](double x) { return 1e-18 * x * x; }, 0.0, 1.0);
    EXPECT_NEAR(v / (1e-18 / 3.0), 1.0, 1e-12);
    EXPECT_EQ(integrate_adaptive([](double) { return 0.0; }, 0.0, 1.0), 0.0);
    EXPECT_NEAR(integrate_adaptive([](double x) { return std::exp(x); }, 1.0, 0.0), 1.0 - std::exp(1.0), 1e-13);
}

TEST(Quadrature, BreaksResolveKinkNearPanelEdge) {
    // The kink lies 7e-5 inside the panel, between the edge and the outermost
    // Kronrod node, so only an explicit break integrates it exactly.
    auto f = [](double x) { return std::abs(x - 0.25); };
    const double lo = 0.24993, hi = 0.3749;
    const double exact = 0.5 * ((0.25 - lo) * (0.25 - lo) + (hi - 0.25) * (hi - 0.25));
    const std::array<double, 1> kink{0.25};
    EXPECT_NEAR(integrate_adaptive(f, lo, hi, kink), exact, 1e-15);
    EXPECT_NEAR(integrate_adaptive(f, hi, lo, kink), -exact, 1e-15);
}

TEST(Quadrature, DyadicBreakpointsRefineTowardFocus) {
    const auto b = dyadic_breakpoints(0.0, 1.0, 0.5, 0.01, 6);
    ASSERT_GE(b.size(), 3u);
    EXPECT_DOUBLE_EQ(b.front(), 0.0);
    EXPECT_DOUBLE_EQ(b.back(), 1.0);
    double smallest = 1.0;
    for (std::size_t i = 1; i < b.size(); ++i) {
        EXPECT_GT(b[i], b[i - 1]);
        smallest = std::min(smallest, b[i] - b[i - 1]);
    }
    EXPECT_LE(smallest, 0.01);
}

TEST(Quadrature, LoglogSlopeRecoversPowerLaw) {
    std::vector<double> x, y;
    for (int k = 3; k <= 9; ++k) {
        x.push_back(std::ldexp(1.0, -k));
        y.push_back(3.0 * std::pow(x.back(), -1.25));
    }
    EXPECT_NEAR(loglog_slope(x, y), -1.25, 1e-12);
    EXPECT_NEAR(loglog_slope(x, y, 3), -1.25, 1e-12);
}

TEST(Quadrature, RatioSpreadIsMaxOverMin) {
    const std::vector<double> v{2.0, 4.0, 6.0}, ref{1.0, 1.0, 2.0};
    EXPECT_NEAR(ratio_spread(v, ref), 2.0, 1e-15);  // ratios 2, 4, 3
}
