#pragma once

// Arbitrary precision rationals (GMP) plus the few helpers the rest of the
// library needs: canonical printing, parsing of "p/q" and decimal literals,
// and reproducible random sampling.

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace krsol {

using Rational = mpq_class;
using Integer = mpz_class;

/// Thrown when a rational literal cannot be parsed.
class RationalParseError : public std::invalid_argument {
public:
    RationalParseError(const std::string& what, std::size_t pos)
        : std::invalid_argument(what), pos_(pos) {}
    std::size_t position() const noexcept { return pos_; }

private:
    std::size_t pos_;
};

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::domain_error("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// "p/q" in lowest terms, or "p" when the denominator is one.
inline std::string to_string(const Rational& r) {
    Rational c(r);
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline double to_double(const Rational& r) { return r.get_d(); }

/// Long-double conversion that keeps more than 53 bits.
inline long double to_long_double(const Rational& r) {
    mpf_class f(r, 192);
    double hi = f.get_d();
    mpf_class rest = f - mpf_class(hi, 192);
    return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
}

namespace detail {

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace detail

/// Parses an optionally signed integer, "p/q", or a decimal such as "-2.125"
/// (decimals are converted exactly). Surrounding whitespace is ignored.
inline Rational parse_rational(std::string_view text) {
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    };
    skip_ws();
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    skip_ws();
    std::size_t start = i;
    std::string int_digits;
    while (i < text.size() && detail::is_digit(text[i])) int_digits += text[i++];
    std::string frac_digits;
    bool has_point = false;
    if (i < text.size() && text[i] == '.') {
        has_point = true;
        ++i;
        while (i < text.size() && detail::is_digit(text[i])) frac_digits += text[i++];
    }
    if (int_digits.empty() && frac_digits.empty())
        throw RationalParseError("expected a number", start);

    Rational value;
    if (has_point) {
        Integer num((int_digits.empty() ? std::string("0") : int_digits) + frac_digits, 10);
        Integer den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_digits.size());
        value = Rational(num, den);
    } else {
        value = Rational(Integer(int_digits, 10));
    }
    skip_ws();
    if (i < text.size() && text[i] == '/') {
        if (has_point) throw RationalParseError("decimal numerator with '/'", i);
        ++i;
        skip_ws();
        std::string den_digits;
        std::size_t den_start = i;
        while (i < text.size() && detail::is_digit(text[i])) den_digits += text[i++];
        if (den_digits.empty()) throw RationalParseError("expected a denominator", den_start);
        Integer den(den_digits);
        if (den == 0) throw RationalParseError("zero denominator", den_start);
        value /= Rational(den);
    }
    skip_ws();
    if (i != text.size()) throw RationalParseError("trailing characters in number", i);
    value.canonicalize();
    return negative ? Rational(-value) : value;
}

/// Uniform random rational num/den with |num| <= max_num and 1 <= den <= max_den.
template <class Rng>
Rational random_rational(Rng& rng, long max_num, long max_den) {
    std::uniform_int_distribution<long> num(-max_num, max_num);
    std::uniform_int_distribution<long> den(1, max_den);
    return make_rational(num(rng), den(rng));
}

/// Random rational strictly inside (lo, hi).
template <class Rng>
Rational random_rational_in(Rng& rng, const Rational& lo, const Rational& hi, long grid = 97) {
    std::uniform_int_distribution<long> k(1, grid - 1);
    Rational t = make_rational(k(rng), grid);
    Rational r = lo + (hi - lo) * t;
    r.canonicalize();
    return r;
}

}  // namespace krsol
