#pragma once

// Symmetric functions of a finite list of field elements and the Vandermonde
// type sums built from them. Each identity function returns its raw left-hand
// side; callers compare against an independently computed right-hand side.

#include "krsol/poly.hpp"
#include "krsol/rational.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace krsol {

class SymalgError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Largest list length accepted by the exact identity sums.
inline constexpr std::size_t kMaxExactLength = 12;

namespace detail {

template <class F>
void require_length(const std::vector<F>& xi) {
    if (xi.empty()) throw SymalgError("empty list");
    if (xi.size() > kMaxExactLength)
        throw SymalgError("list length " + std::to_string(xi.size()) + " exceeds " +
                          std::to_string(kMaxExactLength));
}

template <class F>
void require_off_pole(const std::vector<F>& xi, const F& alpha) {
    for (const auto& x : xi)
        if (x == alpha) throw SymalgError("pole coincides with an entry");
}

template <class F>
F power(const F& x, std::size_t k) {
    F r(1);
    for (std::size_t i = 0; i < k; ++i) r *= x;
    return r;
}

}  // namespace detail

/// sigma_r(xi), with sigma_0 = 1.
template <class F>
F elementary_sym(const std::vector<F>& xi, int r) {
    if (r < 0 || r > static_cast<int>(xi.size())) throw SymalgError("sigma index out of range");
    std::vector<F> e(xi.size() + 1, F(0));
    e[0] = F(1);
    for (std::size_t i = 0; i < xi.size(); ++i)
        for (std::size_t k = i + 1; k >= 1; --k) e[k] += e[k - 1] * xi[i];
    return e[static_cast<std::size_t>(r)];
}

/// All sigma_0..sigma_l at once.
template <class F>
std::vector<F> elementary_syms(const std::vector<F>& xi) {
    std::vector<F> e(xi.size() + 1, F(0));
    e[0] = F(1);
    for (std::size_t i = 0; i < xi.size(); ++i)
        for (std::size_t k = i + 1; k >= 1; --k) e[k] += e[k - 1] * xi[i];
    return e;
}

/// h_p(xi), the sum of all monomials of degree p.
template <class F>
F complete_sym(const std::vector<F>& xi, int p) {
    if (p < 0) throw SymalgError("negative degree");
    // h_p(x_1..x_k) = h_p(x_1..x_{k-1}) + x_k h_{p-1}(x_1..x_k)
    std::vector<F> h(static_cast<std::size_t>(p) + 1, F(0));
    h[0] = F(1);
    for (const auto& x : xi)
        for (std::size_t k = 1; k < h.size(); ++k) h[k] += x * h[k - 1];
    return h[static_cast<std::size_t>(p)];
}

/// Delta(xi_j) = prod_{i != j} (xi_j - xi_i), 0-based j.
template <class F>
F delta(const std::vector<F>& xi, std::size_t j) {
    if (j >= xi.size()) throw SymalgError("index out of range");
    F r(1);
    for (std::size_t i = 0; i < xi.size(); ++i) {
        if (i == j) continue;
        F diff = xi[j] - xi[i];
        if (diff == F(0)) throw SymalgError("duplicate entries");
        r *= diff;
    }
    return r;
}

/// p_nc(t) = prod_j (t - xi_j).
template <class F>
Poly<F> pnc_poly(const std::vector<F>& xi) {
    return Poly<F>::from_roots(xi);
}

template <class F>
F pnc_eval(const std::vector<F>& xi, const F& t) {
    F r(1);
    for (const auto& x : xi) r *= t - x;
    return r;
}

/// p_nc built from its expansion sum_r (-1)^r sigma_r t^{l-r}.
template <class F>
Poly<F> pnc_from_sigmas(const std::vector<F>& xi) {
    std::vector<F> e = elementary_syms(xi);
    std::size_t l = xi.size();
    std::vector<F> c(l + 1, F(0));
    for (std::size_t r = 0; r <= l; ++r) c[l - r] = (r % 2 == 0) ? e[r] : F(-e[r]);
    return Poly<F>(std::move(c));
}

/// sum_i xi_i^{l-s} / Delta(xi_i), 1 <= s <= l.
template <class F>
F vandermonde_basic(const std::vector<F>& xi, int s) {
    detail::require_length(xi);
    int l = static_cast<int>(xi.size());
    if (s < 1 || s > l) throw SymalgError("s out of range");
    F sum(0);
    for (std::size_t i = 0; i < xi.size(); ++i)
        sum += detail::power(xi[i], static_cast<std::size_t>(l - s)) / delta(xi, i);
    return sum;
}

/// sum_i xi_i^s / (Delta(xi_i)(xi_i - alpha)), 0 <= s <= l-1.
template <class F>
F vandermonde_pole(const std::vector<F>& xi, int s, const F& alpha) {
    detail::require_length(xi);
    if (s < 0 || s > static_cast<int>(xi.size()) - 1) throw SymalgError("s out of range");
    detail::require_off_pole(xi, alpha);
    F sum(0);
    for (std::size_t i = 0; i < xi.size(); ++i)
        sum += detail::power(xi[i], static_cast<std::size_t>(s)) / (delta(xi, i) * (xi[i] - alpha));
    return sum;
}

/// d/dalpha of vandermonde_pole: sum_i xi_i^s / (Delta(xi_i)(xi_i - alpha)^2).
template <class F>
F vandermonde_pole_derivative(const std::vector<F>& xi, int s, const F& alpha) {
    detail::require_length(xi);
    if (s < 0 || s > static_cast<int>(xi.size()) - 1) throw SymalgError("s out of range");
    detail::require_off_pole(xi, alpha);
    F sum(0);
    for (std::size_t i = 0; i < xi.size(); ++i) {
        F diff = xi[i] - alpha;
        sum += detail::power(xi[i], static_cast<std::size_t>(s)) / (delta(xi, i) * diff * diff);
    }
    return sum;
}

/// sum_j xi_j^{l-1+p} / Delta(xi_j), p >= 0.
template <class F>
F vandermonde_extended(const std::vector<F>& xi, int p) {
    detail::require_length(xi);
    if (p < 0) throw SymalgError("p must be nonnegative");
    std::size_t e = xi.size() - 1 + static_cast<std::size_t>(p);
    F sum(0);
    for (std::size_t i = 0; i < xi.size(); ++i) sum += detail::power(xi[i], e) / delta(xi, i);
    return sum;
}

/// sum_i xi_i^{l+p} / (Delta(xi_i)(xi_i - alpha)), p >= 0.
template <class F>
F vandermonde_pole_extended(const std::vector<F>& xi, int p, const F& alpha) {
    detail::require_length(xi);
    if (p < 0) throw SymalgError("p must be nonnegative");
    detail::require_off_pole(xi, alpha);
    std::size_t e = xi.size() + static_cast<std::size_t>(p);
    F sum(0);
    for (std::size_t i = 0; i < xi.size(); ++i)
        sum += detail::power(xi[i], e) / (delta(xi, i) * (xi[i] - alpha));
    return sum;
}

/// Terms 1/(Delta_i(alpha) (x - alpha_i)); their sum is 1/prod_k (x - alpha_k).
template <class F>
std::vector<F> partial_fraction_split(const F& x, const std::vector<F>& alpha) {
    detail::require_length(alpha);
    detail::require_off_pole(alpha, x);
    std::vector<F> terms;
    terms.reserve(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) terms.push_back(F(1) / (delta(alpha, i) * (x - alpha[i])));
    return terms;
}

}  // namespace krsol
