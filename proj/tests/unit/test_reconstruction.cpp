#include "idlab/error.hpp"
#include "idlab/reconstruction.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace idlab;

namespace {

// Small problem sizes: these tests check plumbing, not accuracy.
SynthesisOptions tiny_synthesis() {
    SynthesisOptions o;
    o.battery_size = 2;
    o.phi_battery_size = 3;
    o.inversion_cells = 16;
    o.inversion_tau = 1.0 / 128.0;
    return o;
}

} // namespace

TEST(Reconstruction, ParamEvalAndAntiderivative) {
    const ParamA a = sample_param([](double u) { return 1.0 + u; }, 0.0, 1.0, 6);
    ASSERT_EQ(a.n_u(), 6u);
    EXPECT_NEAR(a.eval(0.0, 0.33), 1.33, 1e-15);
    EXPECT_NEAR(a.antiderivative(0.0, 0.7), 0.7 + 0.245, 1e-14);
    // Constant extension outside [lo, hi].
    EXPECT_NEAR(a.eval(0.0, 1.5), 2.0, 1e-15);
    EXPECT_NEAR(a.antiderivative(0.0, 1.5), 1.5 + 1.0, 1e-14);
}

TEST(Reconstruction, KirchhoffInverseMatchesQuadraticFormula) {
    // a = 1 + u gives A = u + u^2/2, so u = sqrt(1 + 2 w) - 1.
    const ParamA a = sample_param([](double u) { return 1.0 + u; }, 0.0, 1.0, 6);
    for (double w : {0.0, 0.1, 0.7, 1.2, 1.5}) {
        EXPECT_NEAR(inverse_kirchhoff(a, 0.0, w), std::sqrt(1.0 + 2.0 * w) - 1.0, 1e-12);
    }
}

TEST(Reconstruction, KirchhoffFieldRoundTrip) {
    const ParamA a = sample_param([](double u) { return 2.0 - u * u; }, 0.0, 1.0, 9);
    auto grid = std::make_shared<const Grid>(build_grid(default_domain(2), 8));
    FieldST u(grid, {0.0, 1.0});
    for (std::size_t n = 0; n < 2; ++n) {
        auto lv = u.level(n);
        for (std::size_t k = 0; k < lv.size(); ++k) lv[k] = std::fmod(0.137 * static_cast<double>(k + n), 1.0);
    }
    const FieldST back = inverse_kirchhoff(a, kirchhoff_transform(a, u));
    for (std::size_t i = 0; i < u.data().size(); ++i) EXPECT_NEAR(back.data()[i], u.data()[i], 1e-10);
}

TEST(Reconstruction, KnotAtFloorIsAdmissibleBelowIsNot) {
    ParamA a;
    a.values = {a.a_lo, 1.0, 1.0};
    EXPECT_NO_THROW(a.validate());
    a.values[0] = 0.5 * a.a_lo;
    EXPECT_THROW(a.validate(), PreconditionError);
}

TEST(Reconstruction, ApplyKeepsLowerOrderTerms) {
    LowerOrderTerms t;
    t.c1 = 0.5;
    const CoefficientSet base = with_lower_order(constant_preset(1.0), t);
    const CoefficientSet c = sample_param([](double u) { return 1.0 + u; }, 0.0, 1.0, 3).apply(base);
    EXPECT_NEAR(c.eval_a(0.0, 0.5), 1.5, 1e-15);
    EXPECT_NEAR(c.eval_c({}, 0.0, 1.0, {}), 0.5, 1e-15);
}

TEST(Reconstruction, TwoGridSynthesisAvoidsInverseCrime) {
    SynthesisOptions o = tiny_synthesis();
    const MeasurementSet ms = synthesize_measurements(affine_preset(1.0, 1.0), default_domain(2), o);
    EXPECT_FALSE(ms.inverse_crime);
    EXPECT_EQ(ms.synthesis_cells, 2 * ms.inversion_cells);
    EXPECT_EQ(ms.pairings.size(), 2u);
    EXPECT_EQ(ms.pairings[0].size(), 3u);
    o.two_grid = false;
    const MeasurementSet crime = synthesize_measurements(affine_preset(1.0, 1.0), default_domain(2), o);
    EXPECT_TRUE(crime.inverse_crime);
    EXPECT_FALSE(crime.warnings.empty());
}

TEST(Reconstruction, NoiseStaysWithinThreeSigma) {
    SynthesisOptions o = tiny_synthesis();
    const MeasurementSet clean = synthesize_measurements(affine_preset(1.0, 1.0), default_domain(2), o);
    o.noise = 0.01;
    o.seed = 42;
    const MeasurementSet noisy = synthesize_measurements(affine_preset(1.0, 1.0), default_domain(2), o);
    const MeasurementSet again = synthesize_measurements(affine_preset(1.0, 1.0), default_domain(2), o);
    bool any_changed = false;
    for (std::size_t k = 0; k < clean.pairings.size(); ++k) {
        for (std::size_t m = 0; m < clean.pairings[k].size(); ++m) {
            const double c = clean.pairings[k][m], n = noisy.pairings[k][m];
            EXPECT_LE(std::abs(n - c), 3.0 * o.noise * std::abs(c) + 1e-300);
            EXPECT_EQ(n, again.pairings[k][m]);
            any_changed = any_changed || n != c;
        }
    }
    EXPECT_TRUE(any_changed);
}

TEST(Reconstruction, ObjectiveVanishesAtDataWithoutPenalty) {
    const MeasurementSet ms = synthesize_measurements(constant_preset(1.0), default_domain(2), tiny_synthesis());
    const ParamA a = sample_param([](double) { return 1.0; }, 0.0, 1.0, 4);
    double misfit = -1.0;
    EXPECT_EQ(recovery_objective(ms.pairings, ms, a, 1.0, &misfit), 0.0);
    EXPECT_EQ(misfit, 0.0);
    const ParamA bent = sample_param([](double u) { return 1.0 + u * u; }, 0.0, 1.0, 4);
    EXPECT_GT(recovery_objective(ms.pairings, ms, bent, 1.0), 0.0);
}

TEST(Reconstruction, RelativeKnotError) {
    const ParamA a = sample_param([](double u) { return 1.1 * (1.0 + u); }, 0.0, 1.0, 5);
    EXPECT_NEAR(relative_knot_error(a, [](double, double u) { return 1.0 + u; }), 0.1, 1e-14);
}
