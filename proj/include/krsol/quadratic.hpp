#pragma once

// Exact elements p + q*sqrt(m) of a real quadratic field Q(sqrt(m)), m > 1
// square-free. A value with q == 0 is an ordinary rational and carries m == 0;
// it combines freely with values of any field. Mixing two different radicands
// is rejected: every computation stays inside one field.

#include "krsol/rational.hpp"

#include <cmath>
#include <compare>
#include <ostream>
#include <stdexcept>
#include <string>

namespace krsol {

class FieldMismatch : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class QuadNumber {
public:
    QuadNumber() = default;
    QuadNumber(long v) : p_(v) {}  // NOLINT(google-explicit-constructor)
    QuadNumber(const Rational& v) : p_(v) {}  // NOLINT(google-explicit-constructor)

    /// p + q*sqrt(m); m is reduced to its square-free part (the square factor
    /// moves into q).
    QuadNumber(const Rational& p, const Rational& q, long m) : p_(p), q_(q) {
        if (m < 0) throw std::domain_error("negative radicand");
        long square = 1;
        long rest = m;
        for (long f = 2; f * f <= rest; ++f) {
            while (rest % (f * f) == 0) {
                rest /= f * f;
                square *= f;
            }
        }
        q_ *= square;
        if (rest == 1 || rest == 0) {
            p_ += (rest == 1) ? q_ : Rational(0);
            q_ = 0;
            m_ = 0;
        } else {
            m_ = rest;
        }
        normalize();
    }

    static QuadNumber sqrt_of(long m) { return QuadNumber(Rational(0), Rational(1), m); }

    const Rational& rational_part() const { return p_; }
    const Rational& radical_coeff() const { return q_; }
    long radicand() const { return m_; }
    bool is_rational() const { return q_ == 0; }

    /// The rational value; throws when the number is irrational.
    const Rational& as_rational() const {
        if (!is_rational()) throw std::domain_error("value " + str() + " is irrational");
        return p_;
    }

    double to_double() const { return static_cast<double>(to_long_double()); }
    long double to_long_double() const {
        long double v = krsol::to_long_double(p_);
        if (m_ != 0) v += krsol::to_long_double(q_) * std::sqrt(static_cast<long double>(m_));
        return v;
    }

    /// Exact sign of p + q*sqrt(m).
    int sign() const {
        int sp = sgn(p_);
        int sq = sgn(q_);
        if (sq == 0) return sp;
        if (sp == 0 || sp == sq) return sq;
        // Opposite signs: compare p^2 with q^2 m.
        Rational lhs = p_ * p_;
        Rational rhs = q_ * q_ * m_;
        if (lhs == rhs) return 0;
        return lhs > rhs ? sp : sq;
    }

    QuadNumber operator-() const {
        QuadNumber r(*this);
        r.p_ = -r.p_;
        r.q_ = -r.q_;
        return r;
    }

    QuadNumber& operator+=(const QuadNumber& o) {
        long m = common_field(o);
        p_ += o.p_;
        q_ += o.q_;
        m_ = m;
        normalize();
        return *this;
    }
    QuadNumber& operator-=(const QuadNumber& o) { return *this += -o; }
    QuadNumber& operator*=(const QuadNumber& o) {
        long m = common_field(o);
        Rational p = p_ * o.p_ + q_ * o.q_ * m;
        Rational q = p_ * o.q_ + q_ * o.p_;
        p_ = p;
        q_ = q;
        m_ = m;
        normalize();
        return *this;
    }
    QuadNumber& operator/=(const QuadNumber& o) { return *this *= o.inverse(); }

    QuadNumber inverse() const {
        Rational norm = p_ * p_ - q_ * q_ * m_;
        if (norm == 0) throw std::domain_error("division by zero");
        QuadNumber r;
        r.p_ = p_ / norm;
        r.q_ = -q_ / norm;
        r.m_ = m_;
        r.normalize();
        return r;
    }

    friend QuadNumber operator+(QuadNumber a, const QuadNumber& b) { return a += b; }
    friend QuadNumber operator-(QuadNumber a, const QuadNumber& b) { return a -= b; }
    friend QuadNumber operator*(QuadNumber a, const QuadNumber& b) { return a *= b; }
    friend QuadNumber operator/(QuadNumber a, const QuadNumber& b) { return a /= b; }

    friend bool operator==(const QuadNumber& a, const QuadNumber& b) {
        return a.p_ == b.p_ && a.q_ == b.q_ && (a.q_ == 0 || a.m_ == b.m_);
    }
    friend std::strong_ordering operator<=>(const QuadNumber& a, const QuadNumber& b) {
        int s = (a - b).sign();
        if (s < 0) return std::strong_ordering::less;
        if (s > 0) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    /// "3/2", "sqrt(2)", "1 + 2*sqrt(3)", "-1/2 - sqrt(5)/3" style.
    std::string str() const {
        if (q_ == 0) return to_string(p_);
        std::string rad = "sqrt(" + std::to_string(m_) + ")";
        Rational aq = abs(q_);
        std::string qs;
        if (aq == 1) {
            qs = rad;
        } else if (aq.get_num() == 1) {
            qs = rad + "/" + aq.get_den().get_str();
        } else {
            qs = to_string(aq) + "*" + rad;
        }
        if (p_ == 0) return (q_ < 0 ? "-" : "") + qs;
        return to_string(p_) + (q_ < 0 ? " - " : " + ") + qs;
    }

    friend std::ostream& operator<<(std::ostream& os, const QuadNumber& x) { return os << x.str(); }

private:
    long common_field(const QuadNumber& o) const {
        if (q_ == 0) return o.q_ == 0 ? 0 : o.m_;
        if (o.q_ == 0 || o.m_ == m_) return m_;
        throw FieldMismatch("values from Q(sqrt(" + std::to_string(m_) + ")) and Q(sqrt(" +
                            std::to_string(o.m_) + ")) cannot be combined");
    }

    void normalize() {
        p_.canonicalize();
        q_.canonicalize();
        if (q_ == 0) m_ = 0;
    }

    Rational p_{0};
    Rational q_{0};
    long m_ = 0;
};

inline double to_double(const QuadNumber& x) { return x.to_double(); }
inline std::string to_string(const QuadNumber& x) { return x.str(); }

}  // namespace krsol
