#include "idlab/error.hpp"
#include "idlab/quadrature.hpp"
#include "idlab/singular.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace idlab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST(Singular, FundamentalSolutionClosedForms) {
    EXPECT_NEAR(fundamental({0.5, 0.0, 0.0}, 2), -std::log(0.5) / (2.0 * kPi), 1e-15);
    EXPECT_NEAR(fundamental({0.0, 0.0, 2.0}, 3), 1.0 / (8.0 * kPi), 1e-15);
    EXPECT_THROW(fundamental({0.0, 0.0, 0.0}, 2), PreconditionError);
}

TEST(Singular, GradientMatchesFiniteDifferences) {
    for (int dim : {2, 3}) {
        const Point x{0.3, -0.7, dim == 3 ? 0.4 : 0.0};
        const Point g = fundamental_grad(x, dim);
        const double h = 1e-6;
        EXPECT_NEAR(g.x, (fundamental(x + Point{h, 0, 0}, dim) - fundamental(x - Point{h, 0, 0}, dim)) / (2 * h), 1e-8);
        EXPECT_NEAR(g.y, (fundamental(x + Point{0, h, 0}, dim) - fundamental(x - Point{0, h, 0}, dim)) / (2 * h), 1e-8);
    }
}

TEST(Singular, LambdaIsHarmonicInside) {
    const SingularTestFn fn(default_domain(2), 0.05);
    const double h = 1e-3;
    for (Point x : {Point{0.5, 0.2, 0}, Point{0.3, 0.05, 0}, Point{0.8, 0.9, 0}}) {
        const double lap = (fn.value(x + Point{h, 0, 0}) + fn.value(x - Point{h, 0, 0}) + fn.value(x + Point{0, h, 0}) +
                            fn.value(x - Point{0, h, 0}) - 4.0 * fn.value(x)) /
                           (h * h);
        EXPECT_NEAR(lap, 0.0, 1e-2 * (1.0 + std::abs(fn.value(x))));
    }
}

TEST(Singular, LambdaGradientMatchesFiniteDifferences) {
    const SingularTestFn fn(default_domain(3), 0.1);
    const Point x{0.55, 0.45, 0.2};
    const Point g = fn.grad(x);
    const double h = 1e-6;
    EXPECT_NEAR(g.z, (fn.value(x + Point{0, 0, h}) - fn.value(x - Point{0, 0, h})) / (2 * h), 1e-5 * std::abs(g.z) + 1e-8);
    EXPECT_NEAR(g.x, (fn.value(x + Point{h, 0, 0}) - fn.value(x - Point{h, 0, 0})) / (2 * h), 1e-5 * std::abs(g.x) + 1e-8);
}

TEST(Singular, GammaConstantTwoDimensions) {
    for (double eps : {0.25, 0.03125, 0.001953125}) {
        const GammaIntegral gi = dn_lambda_gamma_integral(SingularTestFn(default_domain(2), eps));
        EXPECT_NEAR(eps * gi.integral, 1.0 / (2.0 * kPi), 1e-6);
        EXPECT_GE(gi.min_value, 0.0);
    }
}

TEST(Singular, GammaConstantThreeDimensions) {
    for (double eps : {0.25, 0.0078125}) {
        const GammaIntegral gi = dn_lambda_gamma_integral(SingularTestFn(default_domain(3), eps));
        EXPECT_NEAR(eps * gi.integral, 1.0 / (4.0 * std::sqrt(2.0)), 1e-6);
    }
}

TEST(Singular, L4NormGrowsLikeInverseSqrtEps) {
    // On the half plane, ||lambda||_{L^4}^4 = c eps^{-2}: halving eps multiplies the
    // norm by 2^{1/2} up to the truncation of the square.
    const double a = lp_norm_lambda(SingularTestFn(default_domain(2), 0.004), 4.0);
    const double b = lp_norm_lambda(SingularTestFn(default_domain(2), 0.002), 4.0);
    EXPECT_NEAR(b / a, std::sqrt(2.0), 5e-3);
}

TEST(Singular, CutoffsHaveTheirSupport) {
    const CutoffPair c({0.5, 0.0, 0.0}, 0.1, {0.25, 0.75});
    EXPECT_EQ(c.spatial({0.52, 0.0, 0.0}), 1.0);
    EXPECT_EQ(c.spatial({0.65, 0.0, 0.0}), 0.0);
    EXPECT_NEAR(c.spatial({0.575, 0.0, 0.0}), 0.5, 1e-14);
    EXPECT_EQ(c.temporal(0.2), 0.0);
    EXPECT_NEAR(c.temporal(0.5), 0.0625, 1e-15);
    EXPECT_NEAR(c.temporal_max(), 0.0625, 1e-15);
    EXPECT_NEAR(c.temporal_deriv(0.3), (c.temporal(0.3 + 1e-7) - c.temporal(0.3 - 1e-7)) / 2e-7, 1e-7);
}

TEST(Singular, DatumStaysInRangeAndPeaksAtCenter) {
    const Domain d = default_domain(2);
    for (double eps : {0.25, 0.01}) {
        const DirichletDatum g = make_dirichlet_datum(d, eps, 0.2, 0.9, {0.25, 0.75});
        EXPECT_NEAR(g.value({0.0, 0.5, 0.0}, 0.5), 0.2, 1e-15);
        EXPECT_NEAR(g.value(d.xbar, 0.5), g.peak(), 1e-15);
        EXPECT_LE(g.peak(), 0.9);
        EXPECT_GT(g.h1_h1_norm(), 0.0);
    }
}

TEST(Singular, FarFieldBelowCeiling) {
    const Domain d = default_domain(2);
    const SingularTestFn fn(d, 0.01);
    const auto pts = lattice_points(2, 40);
    const FarFieldBound b = far_field_bound_check(fn, d.eps0, pts);
    EXPECT_GT(b.n_points, 0u);
    EXPECT_LE(b.max_lambda, b.ceiling_lambda);
    EXPECT_LE(b.max_grad, b.ceiling_grad);
}
