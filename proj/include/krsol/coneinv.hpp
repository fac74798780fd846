#pragma once

#include "krsol/exact_matrix.hpp"
#include "krsol/params.hpp"
#include "krsol/quadratic.hpp"
#include "krsol/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace krsol {

/// Rows v_1..v_l of the lattice Gamma_v in the (K_1..K_l) frame:
/// v_j = (-1)^{l-j} (2(d_j+1)/q(alpha_j)) ((-1)^r alpha_j^{l-r})_{r=1..l}.
inline ExactMatrix<QuadNumber> lattice_vectors(const SolitonParams& params) {
    auto s = build_structure<QuadNumber>(params);
    int l = params.l();
    ExactMatrix<QuadNumber> v = exact_zero<QuadNumber>(static_cast<std::size_t>(l), static_cast<std::size_t>(l));
    for (int j = 1; j <= l; ++j) {
        const QuadNumber& aj = s.alpha[static_cast<std::size_t>(j - 1)];
        QuadNumber scale = QuadNumber(2 * (params.d(static_cast<std::size_t>(j - 1)) + 1)) / s.q(aj);
        if ((l - j) % 2 != 0) scale = -scale;
        for (int r = 1; r <= l; ++r) {
            QuadNumber pw(1);
            for (int k = 0; k < l - r; ++k) pw *= aj;
            QuadNumber entry = scale * pw;
            if (r % 2 != 0) entry = -entry;
            v[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(r - 1)] = entry;
        }
    }
    return v;
}

/// Coefficients c_j with e_1 = K_1 = sum_j c_j T_j.
inline std::vector<QuadNumber> e1_expansion(const SolitonParams& params) {
    auto s = build_structure<QuadNumber>(params);
    int l = params.l();
    std::vector<QuadNumber> c;
    for (int j = 1; j <= l; ++j) {
        const QuadNumber& aj = s.alpha[static_cast<std::size_t>(j - 1)];
        QuadNumber prod(1);
        for (int k = 1; k <= l; ++k)
            if (k != j) prod *= aj - s.alpha[static_cast<std::size_t>(k - 1)];
        QuadNumber cj = s.q(aj) / (QuadNumber(2 * (params.d(static_cast<std::size_t>(j - 1)) + 1)) * prod);
        if ((l + 1 - j) % 2 != 0) cj = -cj;
        c.push_back(cj);
    }
    return c;
}

namespace detail {

inline std::vector<QuadNumber> tau_raw(const SolitonParams& params) {
    auto s = build_structure<QuadNumber>(params);
    int l = params.l();
    const QuadNumber& al = s.alpha.back();
    QuadNumber ql = s.q(al);
    std::vector<QuadNumber> tau;
    for (int j = 1; j <= l - 1; ++j) {
        QuadNumber prod(1);
        for (int k = 1; k <= l - 1; ++k)
            if (k != j) prod *= al - s.alpha[static_cast<std::size_t>(k - 1)];
        QuadNumber tj = prod / ql;
        if ((l - j) % 2 != 0) tj = -tj;
        tau.push_back(tj);
    }
    return tau;
}

inline Integer floor_of(const Rational& x) {
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return f;
}

}  // namespace detail

/// tau_j, the coefficient of v_j in the lattice reduction of K_1 modulo T_l.
/// Throws std::logic_error if the value is not invariant under normalize.
inline std::vector<QuadNumber> tau(const SolitonParams& params) {
    auto t = detail::tau_raw(params);
    if (detail::tau_raw(normalize(params)) != t) throw std::logic_error("tau changed under normalization");
    return t;
}

/// Reduction of a rational into [0, 1).
inline Rational frac_part(const Rational& x) {
    Rational r = x - Rational(detail::floor_of(x));
    r.canonicalize();
    return r;
}

struct LambdaDimension {
    int dim = 0;
    std::string certificate;
};

/// dim_Q span{1, tau_j} - 1, exact for values in one quadratic field.
inline LambdaDimension lambda_dimension(const std::vector<QuadNumber>& tau) {
    long m = 0;
    for (const auto& t : tau) {
        if (t.is_rational()) continue;
        if (m != 0 && m != t.radicand()) throw FieldMismatch("tau entries from different quadratic fields");
        m = t.radicand();
    }
    if (m == 0) return {0, "all rational"};
    ExactMatrix<Rational> rows;
    rows.push_back({Rational(1), Rational(0)});
    for (const auto& t : tau) rows.push_back({t.rational_part(), t.radical_coeff()});
    int rank = static_cast<int>(exact_rank(exact_transpose(rows)));
    return {rank - 1, "coordinates over {1, sqrt(" + std::to_string(m) + ")} have rank " + std::to_string(rank)};
}

/// Best-effort verdict for floating inputs: integer relations among (1, tau_j)
/// found by lattice reduction. Never exact.
struct FloatLambdaDimension {
    int dim = 0;
    /// log10 of the gap between the weakest accepted relation and the
    /// strongest rejected candidate; larger is more trustworthy.
    double confidence = 0.0;
    bool confident = false;
    std::vector<std::vector<long>> relations;
};

namespace detail {

/// LLL reduction (delta = 3/4) of the rows of `b`, in place.
inline void lll_reduce(std::vector<std::vector<long double>>& b) {
    std::size_t n = b.size();
    if (n == 0) return;
    std::size_t dim = b[0].size();
    auto dot = [dim](const std::vector<long double>& x, const std::vector<long double>& y) {
        long double s = 0;
        for (std::size_t i = 0; i < dim; ++i) s += x[i] * y[i];
        return s;
    };
    std::vector<std::vector<long double>> bs(n, std::vector<long double>(dim));
    std::vector<std::vector<long double>> mu(n, std::vector<long double>(n, 0));
    std::vector<long double> norm2(n);
    auto gram_schmidt = [&] {
        for (std::size_t i = 0; i < n; ++i) {
            bs[i] = b[i];
            for (std::size_t j = 0; j < i; ++j) {
                mu[i][j] = norm2[j] > 0 ? dot(b[i], bs[j]) / norm2[j] : 0;
                for (std::size_t k = 0; k < dim; ++k) bs[i][k] -= mu[i][j] * bs[j][k];
            }
            norm2[i] = dot(bs[i], bs[i]);
        }
    };
    gram_schmidt();
    std::size_t k = 1;
    int guard = 0;
    while (k < n && guard++ < 100000) {
        for (std::size_t j = k; j-- > 0;) {
            long double q = std::round(mu[k][j]);
            if (q != 0) {
                for (std::size_t i = 0; i < dim; ++i) b[k][i] -= q * b[j][i];
                gram_schmidt();
            }
        }
        if (norm2[k] >= (0.75L - mu[k][k - 1] * mu[k][k - 1]) * norm2[k - 1]) {
            ++k;
        } else {
            std::swap(b[k], b[k - 1]);
            gram_schmidt();
            k = std::max<std::size_t>(k - 1, 1);
        }
    }
}

}  // namespace detail

inline FloatLambdaDimension lambda_dimension_float(const std::vector<double>& tau, double scale = 1e12) {
    std::vector<long double> x{1.0L};
    for (double t : tau) x.push_back(t);
    std::size_t n = x.size();
    std::vector<std::vector<long double>> b(n, std::vector<long double>(n + 1, 0));
    for (std::size_t i = 0; i < n; ++i) {
        b[i][i] = 1;
        b[i][n] = static_cast<long double>(scale) * x[i];
    }
    detail::lll_reduce(b);
    // A reduced row is a relation when its residual is at rounding level.
    long double threshold = 1e-2L;
    long double worst_relation = 0;
    long double best_rejected = INFINITY;
    FloatLambdaDimension out;
    for (const auto& row : b) {
        long double resid = std::fabs(row[n]);
        long double coeff = 0;
        for (std::size_t i = 0; i < n; ++i) coeff = std::max(coeff, std::fabs(row[i]));
        long double size = resid + coeff;
        if (resid < threshold * std::max<long double>(coeff, 1)) {
            std::vector<long> rel;
            for (std::size_t i = 0; i < n; ++i) rel.push_back(static_cast<long>(std::llround(row[i])));
            out.relations.push_back(rel);
            worst_relation = std::max(worst_relation, size);
        } else {
            best_rejected = std::min(best_rejected, size);
        }
    }
    int span = static_cast<int>(n) - static_cast<int>(out.relations.size());
    out.dim = span - 1;
    if (out.relations.empty()) {
        out.confidence = std::log10(static_cast<double>(best_rejected));
    } else if (std::isinf(best_rejected)) {
        out.confidence = std::log10(static_cast<double>(scale)) - std::log10(static_cast<double>(worst_relation));
    } else {
        out.confidence = std::log10(static_cast<double>(best_rejected / worst_relation));
    }
    out.confident = out.confidence >= 2.0;
    return out;
}

/// Order of the cyclic subgroup of the torus generated by rational tau.
inline Integer lambda_finite_order(const std::vector<QuadNumber>& tau) {
    Integer order = 1;
    for (const auto& t : tau) {
        if (!t.is_rational()) throw std::domain_error("finite order needs rational tau");
        Rational f = frac_part(t.rational_part());
        Integer den = f.get_den();
        mpz_lcm(order.get_mpz_t(), order.get_mpz_t(), den.get_mpz_t());
    }
    return order;
}

/// Elements k*tau mod Z^{l-1}, k = 0, 1, ... until the first repeat.
inline std::vector<std::vector<Rational>> cyclic_subgroup(const std::vector<QuadNumber>& tau,
                                                          std::size_t limit = 1000000) {
    std::vector<Rational> step;
    for (const auto& t : tau) {
        if (!t.is_rational()) throw std::domain_error("cyclic subgroup needs rational tau");
        step.push_back(frac_part(t.rational_part()));
    }
    std::set<std::vector<Rational>> seen;
    std::vector<std::vector<Rational>> out;
    std::vector<Rational> cur(step.size(), Rational(0));
    while (seen.insert(cur).second) {
        out.push_back(cur);
        if (out.size() > limit) throw std::runtime_error("cyclic subgroup enumeration exceeded limit");
        for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = frac_part(cur[i] + step[i]);
    }
    return out;
}

struct ConeInvariants {
    std::vector<QuadNumber> tau;
    std::vector<QuadNumber> e1_coeffs;
    int lambda_dim = 0;
    /// Empty when Lambda is infinite.
    std::optional<Integer> lambda_order;
    int cone_dim = 0;
    std::string lambda_label;
    std::string descriptor;
    std::string certificate;

    /// "tau = [...]; Lambda = ...; cone = ...; dim = ..."
    std::string summary() const {
        std::string s = "tau = [";
        for (std::size_t j = 0; j < tau.size(); ++j) s += (j ? ", " : "") + tau[j].str();
        s += "]; Lambda = " + lambda_label + "; cone = " + descriptor + "; dim = " + std::to_string(cone_dim);
        return s;
    }
};

namespace detail {

inline std::string complex_factor(int k) { return k == 1 ? "C" : "C^" + std::to_string(k); }

}  // namespace detail

inline ConeInvariants cone_descriptor(const SolitonParams& params) {
    validate(params);
    ConeInvariants ci;
    ci.tau = tau(params);
    ci.e1_coeffs = e1_expansion(params);
    LambdaDimension ld = lambda_dimension(ci.tau);
    ci.lambda_dim = ld.dim;
    ci.certificate = ld.certificate;
    ci.cone_dim = 2 * params.n() - 1 - ci.lambda_dim;

    std::vector<int> ks;
    for (int dj : params.partition.d) ks.push_back(dj + 1);
    std::string product;
    for (std::size_t j = 0; j < ks.size(); ++j) product += (j ? " x " : "") + detail::complex_factor(ks[j]);
    std::string grouped = ks.size() > 1 ? "(" + product + ")" : product;

    bool all_rational = std::all_of(ci.tau.begin(), ci.tau.end(), [](const QuadNumber& t) { return t.is_rational(); });
    if (all_rational) {
        ci.lambda_order = lambda_finite_order(ci.tau);
        if (*ci.lambda_order == 1) {
            ci.lambda_label = "trivial";
            if (ks.size() == 1)
                ci.descriptor = "R^" + std::to_string(2 * ks[0] + 1);
            else
                ci.descriptor = product + " x R";
        } else {
            ci.lambda_label = "Z_" + ci.lambda_order->get_str();
            ci.descriptor = "(" + grouped + "/" + ci.lambda_label + ") x R";
        }
    } else {
        ci.lambda_label = "closed subgroup of dimension " + std::to_string(ci.lambda_dim);
        ci.descriptor = "(" + grouped + "/Lambda) x R";
    }
    return ci;
}

/// For l = 2 with rational alpha: the order k of the image of (1/N)(v_1 + v_2)
/// in T^2/Span{e_1}, the circle obtained by projecting onto the second
/// coordinate modulo the lattice's second-coordinate period.
inline Integer quotient_circle_order_l2(const SolitonParams& params, long N) {
    if (params.l() != 2) throw std::invalid_argument("quotient circle order is defined for l = 2");
    if (N < 1) throw std::invalid_argument("group order must be positive");
    auto v = lattice_vectors(params);
    Rational y1 = v[0][1].as_rational();
    Rational y2 = v[1][1].as_rational();
    // Rational gcd of y1 and y2.
    Integer num1 = abs(y1.get_num()) * y2.get_den();
    Integer num2 = abs(y2.get_num()) * y1.get_den();
    Integer g;
    mpz_gcd(g.get_mpz_t(), num1.get_mpz_t(), num2.get_mpz_t());
    Rational period(g, Integer(y1.get_den() * y2.get_den()));
    period.canonicalize();
    Rational image = (y1 + y2) / Rational(N);
    Rational reduced = frac_part(Rational(image / period));
    return reduced.get_den();
}

}  // namespace krsol
