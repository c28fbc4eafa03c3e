#include "idlab/coefficients.hpp"
#include "idlab/error.hpp"

#include <gtest/gtest.h>

using namespace idlab;

TEST(Coefficients, PresetsByName) {
    for (const char* n : {"constant", "affine", "bioheat", "chemotaxis"}) {
        const CoefficientSet c = preset_by_name(n);
        EXPECT_EQ(c.name, n);
        EXPECT_NO_THROW(c.validate());
    }
    EXPECT_THROW(preset_by_name("quadratic"), PreconditionError);
}

TEST(Coefficients, AffineValuesAndBounds) {
    const CoefficientSet c = affine_preset(1.0, 1.0);
    EXPECT_DOUBLE_EQ(c.eval_a(0.0, 0.5), 1.5);
    EXPECT_DOUBLE_EQ(c.a_lo, 1.0);
    EXPECT_DOUBLE_EQ(c.a_hi, 2.0);
    EXPECT_THROW(affine_preset(1.0, -2.0), PreconditionError);
}

TEST(Coefficients, ClampsOutsideRange) {
    const CoefficientSet c = affine_preset(1.0, 1.0);
    EXPECT_DOUBLE_EQ(c.eval_a(0.0, 3.0), 2.0);
    EXPECT_DOUBLE_EQ(c.eval_a(0.0, -1.0), 1.0);
}

TEST(Coefficients, DefaultStorageIsMinusU) {
    const CoefficientSet c = constant_preset(1.0);
    EXPECT_DOUBLE_EQ(c.eval_d(0.0, 0.7), -0.7);
    EXPECT_DOUBLE_EQ(c.eval_d_prime(0.0, 0.7), -1.0);
}

TEST(Coefficients, BioheatPerfusionDrivesTowardArterialTemperature) {
    BioheatParams p;
    p.u_b = 2.0;
    p.c_b = 0.5;
    const CoefficientSet c = bioheat_preset(p);
    EXPECT_DOUBLE_EQ(c.eval_a(0.0, 2.0), 2.0 * p.kappa);
    EXPECT_DOUBLE_EQ(c.eval_c({}, 0.0, 2.0, {}), 0.0);
    EXPECT_LT(c.eval_c({}, 0.0, 1.0, {}), 0.0);
}

TEST(Coefficients, TableInterpolatesBilinearly) {
    const CoefficientSet c = table_preset({0.0, 0.5, 1.0}, {1.0, 2.0, 3.0, 2.0, 4.0, 6.0}, {0.0, 1.0});
    EXPECT_DOUBLE_EQ(c.eval_a(0.0, 0.25), 1.5);
    EXPECT_DOUBLE_EQ(c.eval_a(1.0, 0.75), 5.0);
    EXPECT_DOUBLE_EQ(c.eval_a(0.5, 0.5), 3.0);
    EXPECT_TRUE(c.a_depends_on_t);
    EXPECT_THROW(table_preset({0.0, 0.0}, {1.0, 1.0}), PreconditionError);
    EXPECT_THROW(table_preset({0.0, 1.0}, {1.0, -1.0}), PreconditionError);
}

TEST(Coefficients, LowerOrderTermsReplaceBCD) {
    LowerOrderTerms t;
    t.b = {0.5, -0.25, 0.0};
    t.c0 = 1.0;
    t.c1 = 2.0;
    t.d_scale = 3.0;
    const CoefficientSet c = with_lower_order(constant_preset(1.0), t);
    EXPECT_DOUBLE_EQ(c.eval_b({}, 0.0, 0.3).y, -0.25);
    EXPECT_DOUBLE_EQ(c.eval_c({}, 0.0, 0.5, {}), 2.0);
    EXPECT_DOUBLE_EQ(c.eval_d(0.0, 0.5), -1.5);
    EXPECT_THROW(with_lower_order(constant_preset(1.0), LowerOrderTerms{{}, 0.0, 0.0, -1.0}), PreconditionError);
}
