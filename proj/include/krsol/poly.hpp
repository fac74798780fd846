#pragma once

#include "krsol/quadratic.hpp"
#include "krsol/rational.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace krsol {

/// Dense univariate polynomial over an exact field, coefficients ascending.
template <class F>
class Poly {
public:
    Poly() = default;
    Poly(F constant) {  // NOLINT(google-explicit-constructor)
        c_.push_back(std::move(constant));
        trim();
    }
    explicit Poly(std::vector<F> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly monomial(std::size_t degree, F coeff = F(1)) {
        std::vector<F> c(degree + 1, F(0));
        c[degree] = std::move(coeff);
        return Poly(std::move(c));
    }

    /// (t - root)
    static Poly linear(const F& root) { return Poly(std::vector<F>{-root, F(1)}); }

    /// prod_j (t - roots[j])^{mult[j]}
    static Poly from_roots(const std::vector<F>& roots, const std::vector<int>& mult) {
        if (roots.size() != mult.size()) throw std::invalid_argument("roots/multiplicities size mismatch");
        Poly p(F(1));
        for (std::size_t j = 0; j < roots.size(); ++j) {
            if (mult[j] < 0) throw std::invalid_argument("negative multiplicity");
            Poly lin = linear(roots[j]);
            for (int k = 0; k < mult[j]; ++k) p *= lin;
        }
        return p;
    }
    static Poly from_roots(const std::vector<F>& roots) {
        return from_roots(roots, std::vector<int>(roots.size(), 1));
    }

    bool is_zero() const { return c_.empty(); }
    /// Degree; -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<F>& coeffs() const { return c_; }
    F coeff(std::size_t k) const { return k < c_.size() ? c_[k] : F(0); }
    F leading() const { return c_.empty() ? F(0) : c_.back(); }

    template <class T = F>
    T eval(const T& x) const {
        T acc = T(0);
        for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + T(c_[k]);
        return acc;
    }
    F operator()(const F& x) const { return eval<F>(x); }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<F> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * F(static_cast<long>(k));
        return Poly(std::move(d));
    }

    Poly operator-() const {
        Poly r(*this);
        for (auto& x : r.c_) x = -x;
        return r;
    }
    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), F(0));
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) { return *this += -o; }
    Poly& operator*=(const Poly& o) {
        if (is_zero() || o.is_zero()) {
            c_.clear();
            return *this;
        }
        std::vector<F> r(c_.size() + o.c_.size() - 1, F(0));
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
        c_ = std::move(r);
        trim();
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Poly& b) { return a *= b; }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    /// Euclidean division: returns (quotient, remainder).
    friend std::pair<Poly, Poly> divmod(const Poly& num, const Poly& den) {
        if (den.is_zero()) throw std::domain_error("polynomial division by zero");
        std::vector<F> rem = num.c_;
        int dd = den.degree();
        if (num.degree() < dd) return {Poly(), num};
        std::vector<F> quot(static_cast<std::size_t>(num.degree() - dd + 1), F(0));
        F lead_inv = F(1) / den.c_.back();
        for (int k = num.degree() - dd; k >= 0; --k) {
            F factor = rem[static_cast<std::size_t>(k + dd)] * lead_inv;
            quot[static_cast<std::size_t>(k)] = factor;
            if (factor == F(0)) continue;
            for (int i = 0; i <= dd; ++i)
                rem[static_cast<std::size_t>(k + i)] -= factor * den.c_[static_cast<std::size_t>(i)];
        }
        return {Poly(std::move(quot)), Poly(std::move(rem))};
    }

    std::string str(const std::string& var = "t") const {
        if (is_zero()) return "0";
        std::string out;
        for (std::size_t k = c_.size(); k-- > 0;) {
            if (c_[k] == F(0)) continue;
            std::string coeff = to_string(c_[k]);
            bool compound = coeff.find_first_of(" ") != std::string::npos;
            if (!out.empty()) out += " + ";
            if (k == 0) {
                out += coeff;
                continue;
            }
            if (coeff == "-1") {
                out += "-";
            } else if (coeff != "1") {
                out += compound ? "(" + coeff + ")*" : coeff + "*";
            }
            out += var;
            if (k > 1) out += "^" + std::to_string(k);
        }
        return out;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == F(0)) c_.pop_back();
    }

    std::vector<F> c_;
};

using ExactPoly = Poly<Rational>;

/// Double-precision copy of the coefficients, for fast floating evaluation.
template <class F>
std::vector<double> to_double_coeffs(const Poly<F>& p) {
    std::vector<double> out;
    out.reserve(p.coeffs().size());
    for (const auto& c : p.coeffs()) out.push_back(to_double(c));
    return out;
}

/// Horner evaluation of double coefficients at any scalar type with + and *.
template <class T>
T horner(const std::vector<double>& c, const T& x) {
    T acc = T(0.0);
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + T(c[k]);
    return acc;
}

}  // namespace krsol
