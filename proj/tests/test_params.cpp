#include "krsol/coneinv.hpp"
#include "krsol/identities.hpp"
#include "krsol/params.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace krsol;

namespace {
QuadNumber Q(long p, long q = 1) { return QuadNumber(make_rational(p, q)); }
}  // namespace

TEST(Params, ValidatesTheStandardCase) {
    auto p = make_params({1}, {Q(0), Q(1)});
    EXPECT_NO_THROW(validate(p));
    EXPECT_EQ(p.n(), 3);
    EXPECT_EQ(p.l(), 2);
}

TEST(Params, RejectsDecreasingAlpha) {
    try {
        validate(make_params({0}, {Q(1), Q(0)}));
        FAIL() << "expected ParamsError";
    } catch (const ParamsError& e) {
        EXPECT_NE(std::string(e.what()).find("alpha not increasing"), std::string::npos);
    }
}

TEST(Params, RejectsPartitionMismatch) {
    Partition part = Partition::from_d({1, 1});
    part.n = 4;  // 3 + 1 + 1 = 5
    try {
        validate(part);
        FAIL() << "expected ParamsError";
    } catch (const ParamsError& e) {
        EXPECT_NE(std::string(e.what()).find("partition mismatch"), std::string::npos);
    }
}

TEST(Params, RejectsNegativeA) { EXPECT_THROW(validate(make_params({0}, {Q(0), Q(1)}, Q(-1))), ParamsError); }

TEST(Params, StructurePolynomialsForL2N3) {
    auto s = build_structure<Rational>(make_params({1}, {Q(0), Q(1)}));
    EXPECT_EQ(s.p_c, ExactPoly::monomial(1));
    EXPECT_EQ(s.P, ExactPoly::monomial(2));
    EXPECT_EQ(s.q, ExactPoly(Rational(2)));
    // F_2 = t^2 - 1 for a = 0
    EXPECT_EQ(s.F_l.exact_value(Rational(3)).value(), Rational(8));
}

TEST(Params, QIsConstantNMinusOneForL2) {
    for (int n = 2; n <= 7; ++n) {
        auto s = build_structure<Rational>(make_params({n - 2}, {Q(0), Q(1)}));
        EXPECT_EQ(s.q, ExactPoly(Rational(n - 1))) << "n = " << n;
    }
}

TEST(Params, QSignPatternAndValuesAtAlpha) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        auto inst = random_rational_instance(rng, 2, 5);
        auto s = build_structure<Rational>(inst.params);
        auto alpha = inst.params.rational_alpha();
        int l = inst.params.l();
        for (int j = 0; j + 1 < l; ++j) {
            // q(alpha_j) = (d_j + 1) prod_{k != j, k < l} (alpha_j - alpha_k); P(alpha_j) = 0 removes the a term
            Rational expected(inst.params.d(static_cast<std::size_t>(j)) + 1);
            for (int k = 0; k + 1 < l; ++k)
                if (k != j) expected *= alpha[static_cast<std::size_t>(j)] - alpha[static_cast<std::size_t>(k)];
            EXPECT_EQ(s.q(alpha[static_cast<std::size_t>(j)]), expected);
            // l - 1 - j of the factors are negative (1-based j)
            int sign = ((l - 1 - (j + 1)) % 2 == 0) ? 1 : -1;
            EXPECT_GT(sign * s.q(alpha[static_cast<std::size_t>(j)]), 0);
        }
    }
}

TEST(Params, FlPositiveBeyondAlphaL) {
    for (long a : {0L, 1L, 3L}) {
        auto s = build_structure<Rational>(make_params({1, 0}, {Q(0), Q(1), Q(5, 2)}, Q(a)));
        EXPECT_NEAR(static_cast<double>(s.F_l.value(2.5L)), 0.0, 1e-15);
        for (double f = 1.0; f <= 1e6; f *= 1.1) {
            long double t = 2.5L * f + 1.0L;
            EXPECT_GT(s.F_l.value(t), 0.0L) << "t = " << static_cast<double>(t);
        }
    }
}

TEST(Params, NormalizeExample) {
    auto p = normalize(make_params({0, 0}, {Q(1), Q(3), Q(7)}, Q(2)));
    EXPECT_EQ(p.a, Q(4));
    EXPECT_EQ(p.alpha[0], Q(0));
    EXPECT_EQ(p.alpha[1], Q(1));
    EXPECT_EQ(p.alpha[2], Q(3));
    auto again = normalize(p);
    EXPECT_EQ(again.alpha, p.alpha);
    EXPECT_EQ(again.a, p.a);
}

TEST(Params, NormalizeKeepsTau) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        auto inst = random_rational_instance(rng, 2, 5);
        EXPECT_EQ(detail::tau_raw(inst.params), detail::tau_raw(normalize(inst.params)));
    }
}
