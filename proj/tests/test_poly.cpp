#include "krsol/exact_matrix.hpp"
#include "krsol/poly.hpp"
#include "krsol/rational.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace krsol;

TEST(Poly, FromRootsWithMultiplicity) {
    // t^2 (t - 1)
    ExactPoly p = ExactPoly::from_roots({Rational(0), Rational(1)}, {2, 1});
    EXPECT_EQ(p.degree(), 3);
    EXPECT_EQ(p.coeff(3), Rational(1));
    EXPECT_EQ(p.coeff(2), Rational(-1));
    EXPECT_EQ(p(Rational(2)), Rational(4));
}

TEST(Poly, DivisionReconstructsTheDividend) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Rational> a(6), b(3);
        for (auto& c : a) c = random_rational(rng, 9, 5);
        for (auto& c : b) c = random_rational(rng, 9, 5);
        b.back() = make_rational(trial % 5 + 1, 3);
        ExactPoly num(a), den(b);
        auto [q, r] = divmod(num, den);
        EXPECT_LT(r.degree(), den.degree());
        EXPECT_EQ(q * den + r, num);
    }
}

TEST(Poly, DerivativeOfMonomial) {
    ExactPoly p = ExactPoly::monomial(4, make_rational(1, 2));
    EXPECT_EQ(p.derivative(), ExactPoly::monomial(3, Rational(2)));
    EXPECT_TRUE(ExactPoly(Rational(7)).derivative().is_zero());
}

TEST(ExactMatrix, DeterminantAndSolve) {
    ExactMatrix<Rational> m{{Rational(2), Rational(1)}, {Rational(1), Rational(3)}};
    EXPECT_EQ(exact_determinant(m), Rational(5));
    auto x = exact_solve(m, std::vector<Rational>{Rational(3), Rational(4)});
    EXPECT_EQ(x[0], Rational(1));
    EXPECT_EQ(x[1], Rational(1));
    ExactMatrix<Rational> sing{{Rational(1), Rational(2)}, {Rational(2), Rational(4)}};
    EXPECT_EQ(exact_rank(sing), 1u);
}
