#pragma once

// Randomized exact identity suites: the Vandermonde family against
// independently computed right-hand sides, and the two flat-model propositions.

#include "krsol/exact_matrix.hpp"
#include "krsol/flatmodel.hpp"
#include "krsol/params.hpp"
#include "krsol/rational.hpp"
#include "krsol/symalg.hpp"

#include <algorithm>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

namespace krsol {

struct IdentityTally {
    std::string name;
    std::size_t checked = 0;
    std::size_t failed = 0;
    std::string first_failure;

    void record(bool ok, const std::string& where) {
        ++checked;
        if (!ok && failed++ == 0) first_failure = where;
    }
    bool passed() const { return checked > 0 && failed == 0; }
};

/// l distinct rationals, sorted.
template <class Rng>
std::vector<Rational> random_distinct(Rng& rng, std::size_t l, long max_num = 40, long max_den = 12) {
    std::vector<Rational> out;
    while (out.size() < l) {
        Rational r = random_rational(rng, max_num, max_den);
        if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// A rational off the given points.
template <class Rng>
Rational random_off(Rng& rng, const std::vector<Rational>& avoid) {
    for (;;) {
        Rational r = random_rational(rng, 40, 12);
        if (std::find(avoid.begin(), avoid.end(), r) == avoid.end()) return r;
    }
}

/// Random rational parameters with l in [lmin, lmax] and an interleaved interior xi.
struct RationalInstance {
    SolitonParams params;
    std::vector<Rational> xi;
};

template <class Rng>
RationalInstance random_rational_instance(Rng& rng, int lmin, int lmax) {
    std::uniform_int_distribution<int> ld(lmin, lmax);
    std::uniform_int_distribution<int> dd(0, 2);
    std::uniform_int_distribution<int> ad(0, 3);
    auto l = static_cast<std::size_t>(ld(rng));
    auto alpha = random_distinct(rng, l, 20, 6);
    std::vector<int> d;
    for (std::size_t j = 0; j + 1 < l; ++j) d.push_back(dd(rng));
    std::vector<QuadNumber> qa(alpha.begin(), alpha.end());
    RationalInstance inst{make_params(d, qa, QuadNumber(make_rational(ad(rng), 2))), {}};
    inst.xi.push_back(random_rational_in(rng, Rational(alpha[0] - 5), alpha[0]));
    for (std::size_t j = 1; j + 1 < l; ++j) inst.xi.push_back(random_rational_in(rng, alpha[j - 1], alpha[j]));
    inst.xi.push_back(random_rational_in(rng, alpha[l - 1], Rational(alpha[l - 1] + 5)));
    return inst;
}

/// The five Vandermonde oracles on `instances` random inputs each, 2 <= l <= 5.
template <class Rng>
std::vector<IdentityTally> vandermonde_suite(Rng& rng, int instances, int lmin = 2, int lmax = 5) {
    std::vector<IdentityTally> t(5);
    t[0].name = "vandermonde_basic";
    t[1].name = "vandermonde_pole";
    t[2].name = "vandermonde_extended";
    t[3].name = "vandermonde_pole_extended";
    t[4].name = "partial_fraction_split";
    std::uniform_int_distribution<int> ld(lmin, lmax);
    std::uniform_int_distribution<int> pd(0, 4);
    for (int k = 0; k < instances; ++k) {
        auto l = ld(rng);
        auto xi = random_distinct(rng, static_cast<std::size_t>(l));
        Rational alpha = random_off(rng, xi);
        // p_nc(alpha) as a direct product, h_p by dynamic programming.
        Rational pnc(1);
        for (const auto& x : xi) pnc *= alpha - x;
        std::string where = "instance " + std::to_string(k);

        for (int s = 1; s <= l; ++s) t[0].record(vandermonde_basic(xi, s) == Rational(s == 1 ? 1 : 0), where);
        for (int s = 0; s <= l - 1; ++s) {
            Rational a_s = detail::power(alpha, static_cast<std::size_t>(s));
            t[1].record(vandermonde_pole(xi, s, alpha) == Rational(-a_s / pnc), where);
        }
        int p = pd(rng);
        t[2].record(vandermonde_extended(xi, p) == complete_sym(xi, p), where);
        Rational rhs(0);
        for (int j = 0; j <= p; ++j) rhs += complete_sym(xi, p - j) * detail::power(alpha, static_cast<std::size_t>(j));
        rhs -= detail::power(alpha, static_cast<std::size_t>(l + p)) / pnc;
        t[3].record(vandermonde_pole_extended(xi, p, alpha) == rhs, where);

        // 1/prod(x - alpha_k) against the split, with alpha a list of l - 1 >= 1 points.
        auto al = random_distinct(rng, static_cast<std::size_t>(std::max(1, l - 1)));
        Rational x = random_off(rng, al);
        Rational prod(1);
        for (const auto& a : al) prod *= x - a;
        Rational sum(0);
        for (const auto& term : partial_fraction_split(x, al)) sum += term;
        t[4].record(sum == Rational(1 / prod), where);
    }
    return t;
}

/// gtheta_on_Y = gbeta_on_Y, gxi_matrix = its closed form, and the beta closedness residuals.
template <class Rng>
std::vector<IdentityTally> flatmodel_suite(Rng& rng, int instances, int lmin = 2, int lmax = 5) {
    std::vector<IdentityTally> t(3);
    t[0].name = "gtheta_on_Y = gbeta_on_Y";
    t[1].name = "gxi quadratic form";
    t[2].name = "beta closedness";
    for (int k = 0; k < instances; ++k) {
        auto inst = random_rational_instance(rng, lmin, lmax);
        std::string where = "instance " + std::to_string(k) + " (" + describe(inst.params) + ")";
        t[0].record(gtheta_on_Y(inst.xi, inst.params) == gbeta_on_Y(inst.xi, inst.params), where);
        t[1].record(gxi_matrix(inst.xi, inst.params) == gxi_closed_form(inst.xi, inst.params), where);
        t[2].record(beta_closedness_coefficients(inst.params).all_zero(), where);
    }
    return t;
}

}  // namespace krsol
