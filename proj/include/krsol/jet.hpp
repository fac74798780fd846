#pragma once

// Second-order forward-mode automatic differentiation. A Jet carries a value,
// its gradient and its (packed, symmetric) Hessian with respect to up to
// kMaxVars independent coordinates. A jet with nvars == 0 is a constant and
// skips all derivative work.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace krsol {

inline constexpr int kMaxVars = 12;
inline constexpr int kMaxPacked = kMaxVars * (kMaxVars + 1) / 2;

inline constexpr int packed_index(int i, int j) {
    return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
}

class Jet {
public:
    Jet() = default;
    Jet(double v) : v_(v) {}  // NOLINT(google-explicit-constructor)

    /// The coordinate function x_k (out of nvars) evaluated at value v.
    static Jet variable(double v, int k, int nvars) {
        if (nvars > kMaxVars || k < 0 || k >= nvars) throw std::out_of_range("jet variable index");
        Jet j(v);
        j.promote(nvars);
        j.d_[static_cast<std::size_t>(k)] = 1.0;
        return j;
    }

    double value() const { return v_; }
    int nvars() const { return n_; }
    double d(int i) const { return i < n_ ? d_[static_cast<std::size_t>(i)] : 0.0; }
    double h(int i, int j) const {
        return (i < n_ && j < n_) ? h_[static_cast<std::size_t>(packed_index(i, j))] : 0.0;
    }

    Jet operator-() const {
        Jet r(*this);
        r.v_ = -v_;
        for (int i = 0; i < n_; ++i) r.d_[static_cast<std::size_t>(i)] = -d_[static_cast<std::size_t>(i)];
        for (int p = 0; p < packed(); ++p) r.h_[static_cast<std::size_t>(p)] = -h_[static_cast<std::size_t>(p)];
        return r;
    }

    Jet& operator+=(const Jet& o) {
        v_ += o.v_;
        if (o.n_ == 0) return *this;
        promote(o.n_);
        for (int i = 0; i < o.n_; ++i) d_[static_cast<std::size_t>(i)] += o.d_[static_cast<std::size_t>(i)];
        for (int p = 0; p < o.packed(); ++p) h_[static_cast<std::size_t>(p)] += o.h_[static_cast<std::size_t>(p)];
        return *this;
    }
    Jet& operator-=(const Jet& o) { return *this += -o; }

    Jet& operator*=(const Jet& o) {
        if (o.n_ == 0) return scale(o.v_);
        if (n_ == 0) {
            double s = v_;
            *this = o;
            return scale(s);
        }
        promote(o.n_);
        Jet b(o);
        b.promote(n_);
        int n = n_;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                auto p = static_cast<std::size_t>(packed_index(i, j));
                h_[p] = v_ * b.h_[p] + b.v_ * h_[p] + d_[static_cast<std::size_t>(i)] * b.d_[static_cast<std::size_t>(j)] +
                        d_[static_cast<std::size_t>(j)] * b.d_[static_cast<std::size_t>(i)];
            }
        for (int i = 0; i < n; ++i)
            d_[static_cast<std::size_t>(i)] = v_ * b.d_[static_cast<std::size_t>(i)] + b.v_ * d_[static_cast<std::size_t>(i)];
        v_ *= b.v_;
        return *this;
    }
    Jet& operator/=(const Jet& o) {
        if (o.n_ == 0) return scale(1.0 / o.v_);
        return *this *= reciprocal(o);
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
    friend Jet operator/(Jet a, const Jet& b) { return a /= b; }

    /// f(u) given f(u0), f'(u0), f''(u0).
    static Jet chain(const Jet& u, double f0, double f1, double f2) {
        Jet r(f0);
        if (u.n_ == 0) return r;
        r.promote(u.n_);
        int n = u.n_;
        for (int i = 0; i < n; ++i) r.d_[static_cast<std::size_t>(i)] = f1 * u.d_[static_cast<std::size_t>(i)];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                auto p = static_cast<std::size_t>(packed_index(i, j));
                r.h_[p] = f1 * u.h_[p] + f2 * u.d_[static_cast<std::size_t>(i)] * u.d_[static_cast<std::size_t>(j)];
            }
        return r;
    }

    static Jet reciprocal(const Jet& u) {
        double inv = 1.0 / u.v_;
        return chain(u, inv, -inv * inv, 2.0 * inv * inv * inv);
    }

private:
    int packed() const { return n_ * (n_ + 1) / 2; }

    void promote(int n) {
        if (n <= n_) return;
        for (int i = n_; i < n; ++i) d_[static_cast<std::size_t>(i)] = 0.0;
        for (int p = packed(); p < n * (n + 1) / 2; ++p) h_[static_cast<std::size_t>(p)] = 0.0;
        n_ = n;
    }

    Jet& scale(double s) {
        v_ *= s;
        for (int i = 0; i < n_; ++i) d_[static_cast<std::size_t>(i)] *= s;
        for (int p = 0; p < packed(); ++p) h_[static_cast<std::size_t>(p)] *= s;
        return *this;
    }

    double v_ = 0.0;
    int n_ = 0;
    std::array<double, kMaxVars> d_{};
    std::array<double, kMaxPacked> h_{};
};

inline Jet exp(const Jet& u) {
    double e = std::exp(u.value());
    return Jet::chain(u, e, e, e);
}
inline Jet log(const Jet& u) {
    double x = u.value();
    return Jet::chain(u, std::log(x), 1.0 / x, -1.0 / (x * x));
}
inline Jet sqrt(const Jet& u) {
    double s = std::sqrt(u.value());
    return Jet::chain(u, s, 0.5 / s, -0.25 / (s * u.value()));
}
inline Jet atan(const Jet& u) {
    double x = u.value();
    double q = 1.0 / (1.0 + x * x);
    return Jet::chain(u, std::atan(x), q, -2.0 * x * q * q);
}
inline Jet sin(const Jet& u) {
    double x = u.value();
    return Jet::chain(u, std::sin(x), std::cos(x), -std::sin(x));
}
inline Jet cos(const Jet& u) {
    double x = u.value();
    return Jet::chain(u, std::cos(x), -std::sin(x), -std::cos(x));
}

/// Scalar-generic helpers so metric code can be written once for double and Jet.
inline double value_of(double x) { return x; }
inline long double value_of(long double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

}  // namespace krsol
