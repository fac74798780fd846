#include "krsol/quadratic.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace krsol;

TEST(QuadNumber, ReducesSquareFactorsOfTheRadicand) {
    QuadNumber s8 = QuadNumber::sqrt_of(8);
    EXPECT_EQ(s8.radicand(), 2);
    EXPECT_EQ(s8.radical_coeff(), Rational(2));
    EXPECT_TRUE(QuadNumber::sqrt_of(9).is_rational());
    EXPECT_EQ(QuadNumber::sqrt_of(9).as_rational(), Rational(3));
}

TEST(QuadNumber, FieldArithmeticIsExact) {
    QuadNumber r2 = QuadNumber::sqrt_of(2);
    EXPECT_EQ(r2 * r2, QuadNumber(2));
    QuadNumber x = QuadNumber(1) + r2;
    EXPECT_EQ(x * x.inverse(), QuadNumber(1));
    EXPECT_NEAR(x.to_double(), 1.0 + std::sqrt(2.0), 1e-15);
}

TEST(QuadNumber, SignIsExactNearCancellation) {
    // 239/169 < sqrt(2) < 577/408, consecutive convergents
    QuadNumber r2 = QuadNumber::sqrt_of(2);
    EXPECT_EQ((r2 - QuadNumber(make_rational(239, 169))).sign(), 1);
    EXPECT_EQ((r2 - QuadNumber(make_rational(577, 408))).sign(), -1);
    EXPECT_LT(QuadNumber(1), r2);
}

TEST(QuadNumber, MixingRadicandsThrows) {
    EXPECT_THROW(QuadNumber::sqrt_of(2) + QuadNumber::sqrt_of(3), FieldMismatch);
}

TEST(QuadNumber, PrintsReadably) {
    EXPECT_EQ((QuadNumber(1) + QuadNumber(Rational(0), Rational(2), 3)).str(), "1 + 2*sqrt(3)");
    EXPECT_EQ(QuadNumber(Rational(0), make_rational(1, 3), 5).str(), "sqrt(5)/3");
    EXPECT_EQ(QuadNumber(make_rational(-1, 2)).str(), "-1/2");
}
