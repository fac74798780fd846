#include "krsol/potential.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace krsol;

TEST(Potential, ClosedFormsForSmallN) {
    PotentialSpec s2{3.0, 2};
    EXPECT_NEAR(H(-2.0, 3.0, s2), 2.0 + 2.0 + 4.5 - 3.0 + 3.0 + 3.0, 1e-14);
    PotentialSpec s3{3.0, 3};
    EXPECT_NEAR(H(0.0, 1.0, s3), 3.0 - 0.5 + std::log(2.0), 1e-14);
}

TEST(Potential, QuadratureMatchesPartialFractions) {
    // 1/(1 + t + t^2 + t^3) = (1/2)(1/(1+t) + (1-t)/(1+t^2))
    for (double x : {0.5, 3.0, 40.0}) {
        double exact = 0.5 * (std::log1p(x) + std::atan(x) - 0.5 * std::log1p(x * x));
        EXPECT_NEAR(potential_integral(x, 5), exact, 1e-12);
    }
    // the n = 4 closed form against quadrature of 1/(1+t+t^2)
    auto f = [](double t) { return 1.0 / (1.0 + t + t * t); };
    double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 7.0, 20, 1e-14);
    EXPECT_NEAR(potential_integral(7.0, 4), q, 1e-12);
}

TEST(Potential, GradientFormulaMatchesJet) {
    PotentialSpec s{3.0, 4};
    double x1 = -2.3, x2 = 4.1;
    Jet j = H_jet(Jet::variable(x1, 0, 2), Jet::variable(x2, 1, 2), s);
    auto dh = dH_formula(x1, x2, s.n);
    EXPECT_NEAR(j.value(), H(x1, x2, s), 1e-12);
    EXPECT_NEAR(j.d(0), dh[0], 1e-12);
    EXPECT_NEAR(j.d(1), dh[1], 1e-12);
}

TEST(Potential, DominatesQuarterOfSquaredNorm) {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n : {2, 3, 4, 5}) {
        PotentialSpec s{2.0001, n};
        for (int i = 0; i < 200; ++i) {
            double x1 = -std::exp(8.0 * u(rng)) + 1.0, x2 = std::exp(8.0 * u(rng));
            EXPECT_GT(H(x1, x2, s), 0.25 * (x1 * x1 + x2 * x2));
        }
    }
}

TEST(Potential, RejectsBadInput) {
    EXPECT_THROW(validate(PotentialSpec{2.0, 3}), std::invalid_argument);
    EXPECT_THROW(H(0.5, 2.0, PotentialSpec{}), std::domain_error);
    EXPECT_THROW(H(-1.0, 0.5, PotentialSpec{}), std::domain_error);
}

TEST(Potential, DdcReproducesKahlerForm) {
    std::mt19937_64 rng(52);
    for (int n : {2, 3}) {
        PotentialSpec spec{3.0, n};
        ChartModel m(potential_params(n));
        for (int i = 0; i < 50; ++i) {
            auto r = ddc_check(m, m.random_point(rng), spec);
            EXPECT_LT(r.residual, 1e-6) << "n = " << n;
            EXPECT_EQ(r.local_factor, r.factor);
        }
        EXPECT_EQ(ddc_factor(spec), 1.0);
    }
}

TEST(Potential, DdcOfPluriharmonicAndAffineFunctions) {
    ChartModel m(potential_params(3));
    std::mt19937_64 rng(53);
    ChartPoint p = m.random_point(rng);
    int bx = m.base_index(0, 0);
    auto re_w = ddc(m, p, [&](const std::vector<Jet>& x) { return x[static_cast<std::size_t>(bx)]; });
    EXPECT_LT(re_w.norm(), 1e-12);
    auto constant = ddc(m, p, [](const std::vector<Jet>&) { return Jet(5.0); });
    EXPECT_EQ(constant.norm(), 0.0);
}

TEST(Potential, GrowthAndGradientBounds) {
    auto rep = potential_properties(PotentialSpec{3.0, 3}, 25);
    EXPECT_EQ(rep.samples, 625u);
    EXPECT_GT(rep.min_H, 0.0);
    EXPECT_GT(rep.ratio_min, 0.25);
    // (1/2)(x^2 + y^2)/(x + y)^2 lies in [1/4, 1/2] for x, y >= 0
    EXPECT_GT(rep.rho_ratio_min, 0.2);
    EXPECT_LT(rep.rho_ratio_max, 0.6);
    EXPECT_TRUE(std::isfinite(rep.gradient_constant));
    EXPECT_GT(rep.gradient_constant, 0.0);
}

TEST(Potential, ExactGradientCertificate) {
    auto c = gradient_certificate_n3();
    EXPECT_TRUE(c.holds);
    EXPECT_EQ(c.first_discriminant, Rational(-32));
    EXPECT_EQ(c.second, ExactPoly(std::vector<Rational>{Rational(0), Rational(0), Rational(1), Rational(2)}));
}
