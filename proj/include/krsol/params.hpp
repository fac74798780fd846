#pragma once

#include "krsol/poly.hpp"
#include "krsol/quadratic.hpp"
#include "krsol/rational.hpp"

#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace krsol {

/// Invalid soliton parameters. The message names the first violated invariant.
class ParamsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// n = l + sum d_j, with one multiplicity d_j per base factor j = 1..l-1.
struct Partition {
    int n = 0;
    int l = 0;
    std::vector<int> d;

    static Partition from_d(std::vector<int> d) {
        Partition p;
        p.l = static_cast<int>(d.size()) + 1;
        p.n = p.l + std::accumulate(d.begin(), d.end(), 0);
        p.d = std::move(d);
        return p;
    }
};

struct SolitonParams {
    Partition partition;
    std::vector<QuadNumber> alpha;
    QuadNumber a;

    int n() const { return partition.n; }
    int l() const { return partition.l; }
    /// d_j for 0-based j; the implied d_l is zero.
    int d(std::size_t j) const {
        return j < partition.d.size() ? partition.d[j] : 0;
    }
    bool is_rational() const {
        if (!a.is_rational()) return false;
        for (const auto& x : alpha)
            if (!x.is_rational()) return false;
        return true;
    }
    std::vector<Rational> rational_alpha() const {
        std::vector<Rational> r;
        r.reserve(alpha.size());
        for (const auto& x : alpha) r.push_back(x.as_rational());
        return r;
    }
    std::vector<double> alpha_double() const {
        std::vector<double> r;
        for (const auto& x : alpha) r.push_back(x.to_double());
        return r;
    }
};

inline SolitonParams make_params(std::vector<int> d, std::vector<QuadNumber> alpha, QuadNumber a = QuadNumber(0)) {
    SolitonParams p;
    p.partition = Partition::from_d(std::move(d));
    p.alpha = std::move(alpha);
    p.a = std::move(a);
    return p;
}

inline void validate(const Partition& part) {
    if (part.l < 2) throw ParamsError("l must be at least 2");
    if (static_cast<int>(part.d.size()) != part.l - 1)
        throw ParamsError("d must have l-1 = " + std::to_string(part.l - 1) + " entries");
    int sum = part.l;
    for (int dj : part.d) {
        if (dj < 0) throw ParamsError("d entries must be nonnegative");
        sum += dj;
    }
    if (part.n < 2) throw ParamsError("n must be at least 2");
    if (sum != part.n)
        throw ParamsError("partition mismatch: l + sum(d) = " + std::to_string(sum) + " but n = " +
                          std::to_string(part.n));
}

/// Returns params unchanged when every invariant holds.
inline const SolitonParams& validate(const SolitonParams& p) {
    validate(p.partition);
    if (static_cast<int>(p.alpha.size()) != p.l())
        throw ParamsError("alpha must have l = " + std::to_string(p.l()) + " entries");
    for (std::size_t j = 1; j < p.alpha.size(); ++j)
        if (!(p.alpha[j - 1] < p.alpha[j])) throw ParamsError("alpha not increasing");
    if (p.a.sign() < 0) throw ParamsError("a must be nonnegative");
    return p;
}

template <class F>
F field_cast(const QuadNumber& x);

template <>
inline QuadNumber field_cast<QuadNumber>(const QuadNumber& x) {
    return x;
}

template <>
inline Rational field_cast<Rational>(const QuadNumber& x) {
    return x.as_rational();
}

/// F_l(t) = P(t) - exp(2a(alpha_l - t)) P(alpha_l).
template <class F>
struct ExpCorrectedPoly {
    Poly<F> P;
    F a;
    F alpha_l;
    F P_at_alpha_l;

    /// Exact value, available when no exponential survives (a = 0 or t = alpha_l).
    std::optional<F> exact_value(const F& t) const {
        if (t == alpha_l) return F(0);
        if (a == F(0)) return P(t) - P_at_alpha_l;
        return std::nullopt;
    }

    long double value(long double t) const {
        long double pv = 0.0L;
        const auto& c = P.coeffs();
        for (std::size_t k = c.size(); k-- > 0;) pv = pv * t + static_cast<long double>(to_long_double(c[k]));
        return pv - correction(t);
    }

    /// exp(2a(alpha_l - t)) P(alpha_l), the amount by which F_l falls short of P.
    long double correction(long double t) const {
        long double av = static_cast<long double>(to_long_double(a));
        long double al = static_cast<long double>(to_long_double(alpha_l));
        return std::exp(2.0L * av * (al - t)) * static_cast<long double>(to_long_double(P_at_alpha_l));
    }

private:
    static long double to_long_double(const Rational& x) { return krsol::to_long_double(x); }
    static long double to_long_double(const QuadNumber& x) { return x.to_long_double(); }
};

template <class F>
struct StructurePolys {
    Poly<F> p_c;
    Poly<F> P;
    Poly<F> q;
    /// F_1 = ... = F_{l-1} = P; F_l carries the exponential correction.
    ExpCorrectedPoly<F> F_l;
    std::vector<F> alpha;
    F a;
};

/// p_c, P, q and F_l built with exact arithmetic over the field F.
template <class F = QuadNumber>
StructurePolys<F> build_structure(const SolitonParams& params) {
    validate(params);
    int l = params.l();
    std::vector<F> alpha;
    for (const auto& x : params.alpha) alpha.push_back(field_cast<F>(x));
    std::vector<F> head(alpha.begin(), alpha.begin() + (l - 1));
    std::vector<int> d = params.partition.d;
    std::vector<int> d1(d);
    for (auto& x : d1) ++x;

    StructurePolys<F> s;
    s.alpha = alpha;
    s.a = field_cast<F>(params.a);
    s.p_c = Poly<F>::from_roots(head, d);
    s.P = Poly<F>::from_roots(head, d1);
    Poly<F> numer = s.P.derivative() + Poly<F>(F(2) * s.a) * s.P;
    auto [quot, rem] = divmod(numer, s.p_c);
    if (!rem.is_zero()) throw std::logic_error("nonzero remainder in (P' + 2aP)/p_c");
    s.q = quot;
    s.F_l = ExpCorrectedPoly<F>{s.P, s.a, alpha.back(), s.P(alpha.back())};
    return s;
}

/// The equivalent parameters with alpha_1 = 0, alpha_2 = 1: alpha -> c alpha + d, a -> a/c
/// with c = 1/(alpha_2 - alpha_1), d = -c alpha_1.
inline SolitonParams normalize(const SolitonParams& params) {
    validate(params);
    QuadNumber c = QuadNumber(1) / (params.alpha[1] - params.alpha[0]);
    QuadNumber shift = -c * params.alpha[0];
    SolitonParams out = params;
    for (auto& x : out.alpha) x = c * x + shift;
    out.a = params.a / c;
    return out;
}

inline std::string describe(const SolitonParams& p) {
    std::string s = "n=" + std::to_string(p.n()) + " l=" + std::to_string(p.l()) + " d=[";
    for (std::size_t j = 0; j < p.partition.d.size(); ++j)
        s += (j ? ", " : "") + std::to_string(p.partition.d[j]);
    s += "] alpha=[";
    for (std::size_t j = 0; j < p.alpha.size(); ++j) s += (j ? ", " : "") + p.alpha[j].str();
    s += "] a=" + p.a.str();
    return s;
}

}  // namespace krsol
