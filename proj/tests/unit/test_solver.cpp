#include "idlab/assembly.hpp"
#include "idlab/commands.hpp"
#include "idlab/error.hpp"
#include "support/mms.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace idlab;

namespace {

ProblemSpec constant_problem(const CoefficientSet& c, double value, int n = 16) {
    ProblemSpec p;
    p.grid = std::make_shared<const Grid>(build_grid(default_domain(2), n));
    p.coeffs = c;
    p.g = [value](Point, double) { return value; };
    p.u0 = [value](Point) { return value; };
    p.tau = 1.0 / 16.0;
    return p;
}

} // namespace

TEST(Solver, ModeNamesRoundTrip) {
    for (Mode m : {Mode::Parabolic, Mode::Elliptic, Mode::Coupled}) EXPECT_EQ(parse_mode(to_string(m)), m);
    EXPECT_THROW(parse_mode("hyperbolic"), PreconditionError);
}

TEST(Solver, ConstantStateIsPreservedToRoundoff) {
    for (const CoefficientSet& c : {constant_preset(2.0), affine_preset(1.0, 1.0), bioheat_preset()}) {
        // Bioheat is at equilibrium only at u = u_b.
        const double v = c.name == "bioheat" ? 1.0 : 0.3;
        const FieldST u = solve_parabolic(constant_problem(c, v));
        for (double x : u.data()) EXPECT_NEAR(x, v, 1e-12) << c.name;
    }
}

TEST(Solver, ConstantFieldHasZeroResidual) {
    const ProblemSpec p = constant_problem(affine_preset(1.0, 1.0), 0.4);
    FieldST u(p.grid, {0.0, 0.5, 1.0});
    for (std::size_t n = 0; n < 3; ++n) std::fill(u.level(n).begin(), u.level(n).end(), 0.4);
    const Assembler a(p.grid);
    for (std::size_t n = 1; n < 3; ++n) {
        const auto r = level_residual(a, p.coeffs, u, n);
        for (double v : r) EXPECT_LE(std::abs(v), 1e-12);
    }
}

TEST(Solver, ManufacturedSpatialOrder) {
    const test::ConvergenceResult r = test::mms_space_study({8, 16, 32}, 0.25);
    for (double o : r.orders) EXPECT_GE(o, 1.9);
}

TEST(Solver, ManufacturedTemporalOrder) {
    const test::ConvergenceResult r = test::mms_time_study(16, {0.25, 0.125, 0.0625, 0.03125});
    for (double o : r.orders) EXPECT_GE(o, 0.9);
}

TEST(Solver, EllipticSolutionSatisfiesMaximumPrinciple) {
    const ExampleReport r = run_elliptic_example(16);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.u.n_levels(), 1u);
}

TEST(Solver, BioheatStaysBetweenZeroAndArterialTemperature) {
    const ExampleReport r = run_bioheat_example(16, 1.0 / 128.0);
    EXPECT_GE(r.min_value, 0.0);
    EXPECT_LE(r.max_value, 1.0);
}

TEST(Solver, ChemotaxisDensityStaysInUnitInterval) {
    const ExampleReport r = run_chemotaxis_example(16, 1.0 / 128.0);
    EXPECT_GE(r.min_value, 0.0);
    EXPECT_LE(r.max_value, 1.0);
}

TEST(Solver, RejectsUnresolvedDatum) {
    const Domain d = default_domain(2);
    const DirichletDatum g = make_dirichlet_datum(d, 0.01, 0.0, 1.0, {0.25, 0.75});
    auto grid = std::make_shared<const Grid>(build_grid(d, 8));
    EXPECT_THROW(solve_parabolic(make_problem(grid, constant_preset(1.0), g, 1.0 / 16.0)), PreconditionError);
}

TEST(Solver, PicardFailureRaisesConvergenceError) {
    ProblemSpec p = test::mms_problem(8, 0.25, test::TimeProfile::Linear);
    p.controls.max_iter = 1;
    p.controls.tol = 1e-15;
    EXPECT_THROW(solve_parabolic(p), ConvergenceError);
}
