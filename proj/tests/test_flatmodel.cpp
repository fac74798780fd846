#include "krsol/flatmodel.hpp"
#include "krsol/identities.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace krsol;

namespace {
Rational R(long p, long q = 1) { return make_rational(p, q); }
SolitonParams l2(int n) { return make_params({n - 2}, {QuadNumber(0), QuadNumber(1)}, QuadNumber(0)); }
}  // namespace

TEST(FlatModel, GthetaL2ByHand) {
    // w_i = xi_i/(xi_i - xi_k), phi_i(Y_1) = xi_k, phi_i(Y_2) = xi_k - 1 (k != i)
    std::vector<Rational> xi{R(-1), R(2)};
    auto g = gtheta_on_Y(xi, l2(3));
    EXPECT_EQ(g[0][0], R(2));  // -xi_1 xi_2
    EXPECT_EQ(g[0][1], R(2));  // -xi_1 xi_2
    EXPECT_EQ(g[1][0], R(2));
    EXPECT_EQ(g[1][1], R(3));  // 1 - xi_1 xi_2
}

TEST(FlatModel, GthetaEqualsGbetaExamples) {
    std::vector<Rational> xi{R(-1), R(2)};
    EXPECT_EQ(gtheta_on_Y(xi, l2(3)), gbeta_on_Y(xi, l2(3)));
    auto p3 = make_params({1, 1}, {QuadNumber(0), QuadNumber(1), QuadNumber(make_rational(5, 2))}, QuadNumber(0));
    std::vector<Rational> xi3{R(-2), R(1, 2), R(4)};
    EXPECT_EQ(gtheta_on_Y(xi3, p3), gbeta_on_Y(xi3, p3));
}

TEST(FlatModel, GxiSymmetricAndDiagonalInXiBasis) {
    std::vector<Rational> xi{R(-1), R(2)};
    auto p = l2(3);
    auto G = gxi_matrix(xi, p);
    EXPECT_EQ(G[0][1], G[1][0]);
    EXPECT_EQ(G, gxi_closed_form(xi, p));
    // Delta(xi_j)/(xi_j - alpha_1): (-3)/(-1), 3/2
    auto D = gxi_in_xi_basis(xi, p);
    EXPECT_EQ(D[0][0], R(3));
    EXPECT_EQ(D[1][1], R(3, 2));
    EXPECT_EQ(D[0][1], R(0));
    EXPECT_EQ(D[1][0], R(0));
}

TEST(FlatModel, InterleavingIsEnforced) {
    EXPECT_THROW(gtheta_on_Y({R(1), R(2)}, l2(3)), FlatModelError);
    EXPECT_THROW(gtheta_on_Y({R(-1), R(1, 2)}, l2(3)), FlatModelError);
    EXPECT_THROW(gtheta_on_Y({R(-1)}, l2(3)), FlatModelError);
}

TEST(FlatModel, BetaClosedness) {
    EXPECT_TRUE(beta_closedness_coefficients(l2(3)).all_zero());
    auto p = make_params({2, 0, 1}, {QuadNumber(-3), QuadNumber(0), QuadNumber(2), QuadNumber(7)}, QuadNumber(1));
    auto b = beta_closedness_coefficients(p);
    EXPECT_TRUE(b.all_zero());
    for (std::size_t i = 0; i < b.beta_i_raw.size(); ++i) EXPECT_NE(b.beta_i_raw[i][i], 0);
}

TEST(FlatModel, RandomizedSuite) {
    std::mt19937_64 rng(31);
    for (const auto& t : flatmodel_suite(rng, 100)) EXPECT_TRUE(t.passed()) << t.name << ": " << t.first_failure;
}

TEST(FlatModel, FlatCoordinatesExample) {
    auto fc = flat_coords({-1.0, 2.0}, l2(3));
    ASSERT_EQ(fc.r.size(), 1u);
    EXPECT_NEAR(fc.r[0], 2.0 * std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(fc.sigma, 0.0, 1e-15);
    auto r2 = flat_radius_squared({R(-1), R(2)}, l2(3));
    EXPECT_EQ(r2[0], R(8));
}

TEST(FlatModel, EmbeddingMarginPositive) {
    std::mt19937_64 rng(32);
    for (int n : {2, 3, 4}) {
        auto p = l2(n);
        ChartModel m(p);
        for (int i = 0; i < 50; ++i) {
            ChartPoint pt = m.random_point(rng, 50.0);
            EXPECT_GT(embedding_margin(m.flat_coords(pt), p), 0.0);
        }
    }
}

TEST(FlatModel, GprimeLengthsOfCircleGenerators) {
    std::mt19937_64 rng(33);
    for (int n : {2, 3}) {
        ChartModel m(l2(n));
        for (int i = 0; i < 20; ++i) {
            ChartPoint pt = m.at_xi(m.random_point(rng).xi);
            auto len = gprime_T_lengths(m, pt);
            auto fc = m.flat_coords(pt);
            for (std::size_t j = 0; j < fc.r.size(); ++j)
                EXPECT_NEAR(len[j], fc.r[j] * fc.r[j], 1e-10 * (1.0 + fc.r[j] * fc.r[j]));
            Eigen::MatrixXd G = m.metric(pt, Which::GPrime);
            EXPECT_NEAR(G(m.t_index(0), m.t_index(0)), 1.0, 1e-12);
        }
    }
}

TEST(FlatModel, GprimeIsFlat) {
    std::mt19937_64 rng(34);
    for (auto p : {l2(2), l2(3), make_params({1, 0}, {QuadNumber(0), QuadNumber(1), QuadNumber(3)}, QuadNumber(0))}) {
        ChartModel m(p);
        for (int i = 0; i < 10; ++i) EXPECT_LT(flat_metric_curvature(m.random_point(rng), p), 1e-6);
    }
}
