#include "krsol/chartmetric.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace krsol;

namespace {
SolitonParams l2(int n, long a = 0) { return make_params({n - 2}, {QuadNumber(0), QuadNumber(1)}, QuadNumber(a)); }
SolitonParams l3() {
    return make_params({1, 0}, {QuadNumber(0), QuadNumber(1), QuadNumber(3)}, QuadNumber(0));
}
}  // namespace

TEST(ChartMetric, PositiveDefiniteAndSymmetric) {
    std::mt19937_64 rng(41);
    for (auto p : {l2(2), l2(3), l2(4), l2(3, 1), l3()}) {
        ChartModel m(p);
        for (int i = 0; i < 20; ++i) {
            ChartPoint pt = m.random_point(rng);
            for (Which w : {Which::G, Which::GPrime}) {
                Eigen::MatrixXd G = m.metric(pt, w);
                EXPECT_LT((G - G.transpose()).norm(), 1e-12 * G.norm());
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
                EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0) << describe(p);
            }
        }
    }
}

TEST(ChartMetric, MomentCoordinatesOrthogonalToAngles) {
    std::mt19937_64 rng(42);
    ChartModel m(l2(3));
    for (int i = 0; i < 10; ++i) {
        ChartPoint pt = m.random_point(rng);
        Eigen::MatrixXd G = m.metric(pt, Which::G);
        for (int j = 0; j < m.l(); ++j)
            for (int r = 0; r < m.l(); ++r) EXPECT_NEAR(G(j, m.t_index(r)), 0.0, 1e-12);
    }
}

TEST(ChartMetric, TorusInvariance) {
    std::mt19937_64 rng(43);
    for (auto p : {l2(3), l3()}) {
        ChartModel m(p);
        ChartPoint pt = m.random_point(rng);
        ChartPoint moved = pt;
        for (auto& t : moved.t) t += 1.234;
        EXPECT_LT((m.metric(pt, Which::G) - m.metric(moved, Which::G)).norm(), 1e-12);
    }
}

TEST(ChartMetric, ThetaIsDtAtChartCenter) {
    ChartModel m(l2(3));
    auto cf = m.local_connection_forms(m.at_xi({-1.0, 2.0}));
    for (int r = 0; r < m.l(); ++r)
        for (int k = 0; k < m.dim(); ++k)
            EXPECT_NEAR(cf.theta[static_cast<std::size_t>(r)](k), k == m.t_index(r) ? 1.0 : 0.0, 1e-15);
    // alpha_1 = 0 kills the curvature of theta_1
    EXPECT_LT(cf.dtheta[0].norm(), 1e-14);
}

TEST(ChartMetric, KahlerStructure) {
    std::mt19937_64 rng(44);
    for (auto p : {l2(2), l2(3), l2(3, 1), l3()}) {
        ChartModel m(p);
        for (int i = 0; i < 10; ++i) EXPECT_LT(m.kahler_structure_check(m.random_point(rng)).max(), 1e-8) << describe(p);
    }
}

TEST(ChartMetric, RicciFlatWhenAIsZero) {
    std::mt19937_64 rng(45);
    for (auto p : {l2(2), l2(3), l2(4), l3()}) {
        ChartModel m(p);
        for (int i = 0; i < 10; ++i) {
            auto c = m.curvature(m.random_point(rng), Which::G);
            EXPECT_LT(c.norm_ric / (1.0 + c.norm_rm), 1e-6) << describe(p);
        }
    }
}

TEST(ChartMetric, RicciIsTwiceHessianOfPotentialWhenAIsPositive) {
    std::mt19937_64 rng(46);
    ChartModel m(l2(3, 1));
    for (int i = 0; i < 10; ++i) {
        ChartPoint pt = m.random_point(rng);
        auto c = m.curvature(pt, Which::G);
        double best = std::min(m.soliton_residual_scaled(pt, 2.0), m.soliton_residual_scaled(pt, -2.0));
        EXPECT_LT(best / (1.0 + c.norm_rm), 1e-8);
        EXPECT_GT(c.norm_ric, 1e-5);
    }
}

TEST(ChartMetric, DeviationMatchesClosedForm) {
    std::mt19937_64 rng(47);
    for (auto p : {l2(2), l2(3), l2(3, 1)}) {
        ChartModel m(p);
        for (int i = 0; i < 20; ++i) {
            auto rep = m.g_gprime_deviation(m.random_point(rng, 50.0));
            EXPECT_LT(std::fabs(rep.norm - rep.closed_form) / rep.closed_form, 1e-10L) << describe(p);
        }
    }
}

TEST(ChartMetric, DeviationPositiveAtSample) {
    ChartModel m(l2(3));
    auto rep = m.g_gprime_deviation(m.at_xi({-1.0, 2.0}));
    EXPECT_GT(rep.norm, 0.0L);
}

TEST(ChartMetric, RhoSurrogateExample) {
    ChartModel m(l2(3));
    auto [rho, s] = m.rho_surrogate(m.at_xi({-1.0, 2.0}));
    EXPECT_DOUBLE_EQ(rho, 3.0);
    EXPECT_NEAR(s, 2.0 * std::sqrt(2.0), 1e-14);
}

TEST(ChartMetric, DomainViolations) {
    ChartModel m(l2(3));
    EXPECT_TRUE(m.domain_violation(m.at_xi({0.5, 2.0})).has_value());
    EXPECT_TRUE(m.domain_violation(m.at_xi({-1.0, 0.5})).has_value());
    EXPECT_FALSE(m.domain_violation(m.at_xi({-1.0, 2.0})).has_value());
    EXPECT_THROW(m.flat_coords(m.at_xi({-1.0, 0.5})), ChartDomainError);
}

TEST(ChartMetric, CoordinateRoundTrip) {
    std::mt19937_64 rng(48);
    ChartModel m(l3());
    ChartPoint pt = m.random_point(rng);
    EXPECT_EQ(m.coords(m.point(m.coords(pt))), m.coords(pt));
}
