#include "idlab/error.hpp"
#include "idlab/identifiability.hpp"
#include "idlab/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace idlab;

TEST(Identifiability, AntiderivativeOfAffine) {
    const CoefficientSet c = affine_preset(1.0, 1.0);
    EXPECT_NEAR(antiderivative_A(c, 0.0, 0.8, 0.0), 0.8 + 0.32, 1e-13);
    EXPECT_NEAR(antiderivative_A(c, 0.0, 0.2, 0.6), -(0.4 + 0.5 * (0.36 - 0.04)), 1e-13);
}

TEST(Identifiability, LocatesConstantDisagreement) {
    const auto d = locate_disagreement(constant_preset(2.0), constant_preset(1.0), default_domain(2), 64);
    ASSERT_TRUE(d.has_value());
    EXPECT_EQ(d->orientation, 1);
    EXPECT_NEAR(d->max_diff, 1.0, 1e-14);
    EXPECT_NEAR(d->eta, 0.5, 1e-14);
    // The whole (t, g) box qualifies.
    EXPECT_NEAR(d->rect.t1, 0.0, 1e-14);
    EXPECT_NEAR(d->rect.t2, 1.0, 1e-14);
    EXPECT_NEAR(d->rect.g2 - d->rect.g1, 1.0, 1e-14);
}

TEST(Identifiability, LocatesSignedDisagreementRegion) {
    // a1 - a2 = u - 0.6 is most negative at u = 0, where the gap is 0.6;
    // gap >= eta = 0.3 needs u <= 0.3, up to one cell of width 1/64.
    const auto d = locate_disagreement(affine_preset(0.4, 1.0), constant_preset(1.0), default_domain(2), 64);
    ASSERT_TRUE(d.has_value());
    EXPECT_EQ(d->orientation, -1);
    EXPECT_LT(d->g_witness, 0.1);
    EXPECT_LE(d->rect.g2, 0.3 + 1.0 / 64.0);
    EXPECT_FALSE(locate_disagreement(constant_preset(1.0), constant_preset(1.0), default_domain(2), 32).has_value());
}

TEST(Identifiability, PrincipalTermVanishesForEqualA) {
    const Domain d = default_domain(2);
    const DirichletDatum g = make_dirichlet_datum(d, 0.05, 0.0, 1.0, {0.25, 0.75});
    const SingularTestFn fn(d, 0.05);
    EXPECT_EQ(principal_term(constant_preset(1.0), constant_preset(1.0), g, fn, 0.0), 0.0);
}

TEST(Identifiability, PrincipalTermForConstantsAgainstOracle) {
    // For constants a1 - a2 = 1 the principal term is
    //   int chi(t) int (g - g1) d_n lambda ds dt
    // which reduces to a product of one-dimensional integrals.
    const Domain d = default_domain(2);
    const double eps = 0.05;
    const DirichletDatum g = make_dirichlet_datum(d, eps, 0.0, 1.0, {0.25, 0.75});
    const SingularTestFn fn(d, eps);
    const double p = principal_term(constant_preset(2.0), constant_preset(1.0), g, fn, 0.0);
    const CutoffPair& cut = g.cutoffs();
    const double time = integrate_adaptive([&](double t) { return cut.temporal(t) * cut.temporal(t); }, 0.25, 0.75);
    const double space = integrate_adaptive(
        [&](double x) {
            const Point q{x, 0.0, 0.0};
            return cut.spatial(q) * fn.normal_derivative(q);
        },
        0.5 - eps, 0.5 + eps);
    const double amp = g.amplitude();
    EXPECT_NEAR(p, amp * time * space, 1e-9 * std::abs(p));
}

TEST(Identifiability, HarmonicCheckRejectsNonHarmonicSpace) {
    SeparableTerm t;
    t.space = [](Point x) { return x.x * x.x; };
    t.time = [](double s) { return s * (1.0 - s); };
    EXPECT_THROW(check_harmonic(SpaceTimeFn(t), default_domain(2)), PreconditionError);
    t.space = [](Point x) { return x.x * x.x - x.y * x.y; };
    EXPECT_NO_THROW(check_harmonic(SpaceTimeFn(t), default_domain(2)));
}

TEST(Identifiability, DirichletBatteryCoversTwoScalesAndFourLevels) {
    const auto b = dirichlet_battery(default_domain(2), 8, {0.0, 1.0}, {0.25, 0.75});
    ASSERT_EQ(b.size(), 8u);
    for (const auto& g : b) {
        EXPECT_GE(g.g1(), 0.0);
        EXPECT_LE(g.peak(), 1.0);
    }
    EXPECT_NE(b[0].eps(), b[7].eps());
}

TEST(Identifiability, ReverseCheckIdenticalSpecsElliptic) {
    ReverseCheckOptions o;
    o.mode = Mode::Elliptic;
    o.n_cells = 16;
    o.battery_size = 4;
    const CoefficientSet c = affine_preset(1.0, 1.0);
    const ReverseCheckReport r = reverse_check(c, c, default_domain(2), nullptr, o);
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.max_gap, r.threshold);
}

TEST(Identifiability, ReverseCheckRefusesDifferentLowerOrder) {
    ReverseCheckOptions o;
    o.mode = Mode::Elliptic;
    o.n_cells = 16;
    LowerOrderTerms t;
    t.c1 = 1.0;
    EXPECT_THROW(reverse_check(constant_preset(1.0), with_lower_order(constant_preset(1.0), t), default_domain(2),
                               nullptr, o),
                 PreconditionError);
}

TEST(Identifiability, SweepWithoutDisagreementSkipsSolves) {
    SweepOptions o;
    o.eps_factors = {0.125, 0.0625};
    const ScalingReport r = discrimination_sweep(constant_preset(1.0), constant_preset(1.0), default_domain(2), o);
    EXPECT_EQ(r.verdict, Verdict::NotDetected);
    for (const ScalingRow& row : r.rows) {
        EXPECT_EQ(row.principal, 0.0);
        EXPECT_FALSE(row.solved);
    }
}
