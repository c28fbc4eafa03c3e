#include "idlab/error.hpp"
#include "idlab/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace idlab;

TEST(Geometry, DefaultDomainValidates) {
    const Domain d = default_domain(2);
    EXPECT_NO_THROW(d.validate());
    EXPECT_DOUBLE_EQ(d.normal().y, -1.0);
    EXPECT_DOUBLE_EQ(d.gamma_m_measure(), 2.0 * d.eps0);
}

TEST(Geometry, RejectsBadDomains) {
    Domain d = default_domain(2);
    d.eps0 = 0.0;
    EXPECT_THROW(d.validate(), PreconditionError);
    d = default_domain(2);
    d.xbar = {0.1, 0.0, 0.0};  // Gamma_M would leave the face
    EXPECT_THROW(d.validate(), PreconditionError);
}

TEST(Geometry, ExteriorPointLiesOutsideAtDistanceEps) {
    const Domain d = default_domain(2);
    for (double eps : {0.25, 0.1, 0.01}) {
        const Point p = exterior_point(d, eps);
        EXPECT_NEAR(distance_to_domain(d, p), eps, 1e-15);
        EXPECT_LT(p.y, 0.0);
    }
    EXPECT_THROW(exterior_point(d, 0.5), PreconditionError);
}

TEST(Geometry, UniformGridWeightsIntegrateExactly) {
    const Grid g = build_grid(default_domain(2), 16);
    EXPECT_EQ(g.n_nodes(), 17u * 17u);
    const auto w = g.volume_weights();
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-14);
    const auto b = g.boundary_weights();
    EXPECT_NEAR(std::accumulate(b.begin(), b.end(), 0.0), 4.0, 1e-14);
    const auto gm = g.gamma_m_weights();
    EXPECT_NEAR(std::accumulate(gm.begin(), gm.end(), 0.0), 0.5, 1e-14);
}

TEST(Geometry, NodeClassesPartitionTheGrid) {
    const Grid g = build_grid(default_domain(2), 16);
    EXPECT_EQ(g.interior_nodes().size() + g.gamma_m_nodes().size() + g.other_boundary_nodes().size(), g.n_nodes());
    for (std::size_t k : g.gamma_m_nodes()) {
        const Point p = g.point(k);
        EXPECT_EQ(p.y, 0.0);
        EXPECT_LE(std::abs(p.x - 0.5), 0.25 + 1e-15);
    }
}

TEST(Geometry, GradedGridResolvesScale) {
    const Domain d = default_domain(2);
    for (double eps : {0.0625, 0.0078125}) {
        const Grid g = build_grid_for_scale(d, eps);
        EXPECT_LE(g.h_min(), eps / 4.0 + 1e-15);
        EXPECT_LE(g.h_max(), 1.5 / 32.0 + 1e-12);  // a short last cell is merged into its neighbour
        const auto xs = g.xs();
        for (std::size_t i = 1; i < xs.size(); ++i) EXPECT_GT(xs[i], xs[i - 1]);
        EXPECT_DOUBLE_EQ(xs.front(), 0.0);
        EXPECT_DOUBLE_EQ(xs.back(), 1.0);
    }
}
