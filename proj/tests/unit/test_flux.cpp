#include "idlab/error.hpp"
#include "idlab/flux.hpp"
#include "idlab/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace idlab;

namespace {

FieldST solve_datum(const CoefficientSet& c, double eps, int n = 16) {
    const Domain d = default_domain(2);
    const DirichletDatum g = make_dirichlet_datum(d, eps, 0.0, 1.0, {0.25, 0.75});
    auto grid = std::make_shared<const Grid>(build_grid(d, n));
    return solve_parabolic(make_problem(grid, c, g, 1.0 / 128.0));
}

} // namespace

TEST(Flux, BatteryIsNestedAndSupportedOnGammaM) {
    const Domain d = default_domain(2);
    const auto b4 = gamma_m_battery(d, 4), b8 = gamma_m_battery(d, 8);
    ASSERT_EQ(b8.size(), 8u);
    for (std::size_t i = 0; i < b4.size(); ++i) EXPECT_EQ(b4[i].label, b8[i].label);
    const Grid grid = build_grid(d, 16);
    for (const auto& m : b8) EXPECT_NO_THROW(check_gamma_m_support(m.phi, grid, Mode::Parabolic));
}

TEST(Flux, PairingIsLinearInTheTestFunction) {
    const FieldST u = solve_datum(affine_preset(1.0, 1.0), 0.25);
    const FluxFunctional j(u, affine_preset(1.0, 1.0));
    const auto b = gamma_m_battery(u.grid().domain(), 3);
    const double p0 = j.pair(b[0].phi), p1 = j.pair(b[1].phi);
    EXPECT_NEAR(j.pair(2.0 * b[0].phi + (-0.5) * b[1].phi), 2.0 * p0 - 0.5 * p1, 1e-13 * (std::abs(p0) + std::abs(p1)));
}

TEST(Flux, PartsSumToTotal) {
    const FieldST u = solve_datum(bioheat_preset(), 0.25);
    const FluxFunctional j(u, bioheat_preset());
    const auto b = gamma_m_battery(u.grid().domain(), 2);
    const PairingParts p = j.parts(b[1].phi);
    EXPECT_DOUBLE_EQ(p.total(), p.stiff + p.drift + p.reaction + p.storage);
    EXPECT_DOUBLE_EQ(j.pair(b[1].phi), p.total());
}

TEST(Flux, IdenticalSolutionsHaveZeroGap) {
    const CoefficientSet c = affine_preset(1.0, 1.0);
    const FieldST u = solve_datum(c, 0.25);
    const FluxFunctional j1(u, c), j2(u, c);
    const FluxGap g = flux_gap_on_gamma_m(j1, j2, gamma_m_battery(u.grid().domain(), 8));
    EXPECT_EQ(g.gap, 0.0);
    EXPECT_EQ(g.per_member.size(), 8u);
}

TEST(Flux, DifferentConductivitiesGiveNonzeroGap) {
    const FieldST u1 = solve_datum(constant_preset(2.0), 0.25), u2 = solve_datum(constant_preset(1.0), 0.25);
    const FluxFunctional j1(u1, constant_preset(2.0)), j2(u2, constant_preset(1.0));
    EXPECT_GT(flux_gap_on_gamma_m(j1, j2, gamma_m_battery(u1.grid().domain(), 4)).gap, 1e-4);
}

TEST(Flux, WeakResidualVanishesForInteriorTestFunction) {
    const CoefficientSet c = affine_preset(1.0, 1.0);
    const FieldST u = solve_datum(c, 0.25);
    constexpr double pi = 3.14159265358979323846;
    SeparableTerm t;
    t.space = [](Point x) { return std::sin(pi * x.x) * std::sin(pi * x.y); };
    t.space_grad = [](Point x) {
        return Point{pi * std::cos(pi * x.x) * std::sin(pi * x.y), pi * std::sin(pi * x.x) * std::cos(pi * x.y), 0.0};
    };
    t.time = [](double s) { return s * (1.0 - s); };
    t.time_deriv = [](double s) { return 1.0 - 2.0 * s; };
    // Nodal interpolant of phi is a combination of free-node residual rows.
    EXPECT_NEAR(weak_residual(u, SpaceTimeFn(t), c), 0.0, 1e-9);
}

TEST(Flux, RejectsTestFunctionNotVanishingAtEndTimes) {
    const CoefficientSet c = constant_preset(1.0);
    const FieldST u = solve_datum(c, 0.25);
    SeparableTerm t;
    t.space = [](Point) { return 1.0; };
    t.time = [](double) { return 1.0; };
    const FluxFunctional j(u, c);
    EXPECT_THROW((void)j.pair(SpaceTimeFn(t)), PreconditionError);
}

TEST(Flux, H1NormOfSeparableFunction) {
    const Grid grid = build_grid(default_domain(2), 32);
    SeparableTerm t;
    t.space = [](Point x) { return x.x; };
    t.space_grad = [](Point) { return Point{1.0, 0.0, 0.0}; };
    t.time = [](double s) { return s; };
    t.time_deriv = [](double) { return 1.0; };
    // ||x||_{H^1}^2 = 1/3 + 1; int (t^2 + 1) dt = 4/3.
    EXPECT_NEAR(h1_h1_norm(SpaceTimeFn(t), grid), std::sqrt(4.0 / 3.0 * 4.0 / 3.0), 2e-3);
}
