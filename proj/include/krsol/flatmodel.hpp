#pragma once

// Exact comparison data for the locally flat metric g': the vertical frame,
// both sides of the change-of-variables identities evaluated on the Y basis,
// closedness of the beta forms, and the embedding coordinates (r_j, sigma).

#include "krsol/chartmetric.hpp"
#include "krsol/coneinv.hpp"
#include "krsol/exact_matrix.hpp"
#include "krsol/params.hpp"
#include "krsol/symalg.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace krsol {

class FlatModelError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The vertical frame in the (K_r) / (theta_r) bases, all exact.
struct VerticalFrame {
    /// Y[j][r] = (-1)^{r} alpha_j^{l-r}, r = 1..l (stored 0-based).
    ExactMatrix<Rational> Y;
    /// beta[0] = beta_0, beta[i] = beta_i; rows of theta_r coefficients.
    ExactMatrix<Rational> beta;
    /// T_j = t_in_y[j] * Y_j.
    std::vector<Rational> t_in_y;
    /// Delta_i(alpha_1..alpha_{l-1}) for i = 1..l-1.
    std::vector<Rational> delta_head;
};

namespace detail {

inline std::vector<Rational> head(const std::vector<Rational>& alpha) {
    return std::vector<Rational>(alpha.begin(), alpha.end() - 1);
}

inline Rational pow_q(const Rational& x, int k) {
    Rational r(1);
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

/// Pairing of a theta-row with Y_m.
inline Rational pair(const std::vector<Rational>& form, const std::vector<Rational>& y) {
    Rational s(0);
    for (std::size_t r = 0; r < form.size(); ++r) s += form[r] * y[r];
    return s;
}

}  // namespace detail

inline void require_interior(const std::vector<Rational>& xi, const std::vector<Rational>& alpha) {
    std::size_t l = alpha.size();
    if (xi.size() != l) throw FlatModelError("xi must have l entries");
    for (std::size_t j = 0; j < l; ++j) {
        if (j + 1 < l && !(xi[j] < alpha[j])) throw FlatModelError("interleaving violated: xi_" + std::to_string(j + 1) + " >= alpha_" + std::to_string(j + 1));
        std::size_t below = (j + 1 == l) ? j : j - 1;
        if (j > 0 && !(xi[j] > alpha[below]))
            throw FlatModelError("interleaving violated: xi_" + std::to_string(j + 1) + " <= alpha_" + std::to_string(below + 1));
    }
}

inline VerticalFrame vertical_frame(const SolitonParams& params) {
    validate(params);
    auto alpha = params.rational_alpha();
    auto s = build_structure<Rational>(params);
    int l = params.l();
    auto L = static_cast<std::size_t>(l);
    VerticalFrame vf;
    vf.Y = exact_zero<Rational>(L, L);
    for (std::size_t j = 0; j < L; ++j)
        for (int r = 1; r <= l; ++r) {
            Rational v = detail::pow_q(alpha[j], l - r);
            vf.Y[j][static_cast<std::size_t>(r - 1)] = (r % 2 == 0) ? v : Rational(-v);
        }
    auto hd = detail::head(alpha);
    vf.beta = exact_zero<Rational>(L, L);
    auto e0 = elementary_syms(hd);
    for (int r = 1; r <= l; ++r) vf.beta[0][static_cast<std::size_t>(r - 1)] = e0[static_cast<std::size_t>(r - 1)];
    for (std::size_t i = 0; i + 1 < L; ++i) {
        std::vector<Rational> rest;
        for (std::size_t k = 0; k + 1 < L; ++k)
            if (k != i) rest.push_back(alpha[k]);
        auto ei = elementary_syms(rest);
        for (int r = 2; r <= l; ++r) vf.beta[i + 1][static_cast<std::size_t>(r - 1)] = ei[static_cast<std::size_t>(r - 2)];
        vf.delta_head.push_back(delta(hd, i));
    }
    for (std::size_t j = 0; j < L; ++j) {
        Rational c = Rational(2 * (params.d(j) + 1)) / s.q(alpha[j]);
        if ((l - static_cast<int>(j + 1)) % 2 != 0) c = -c;
        vf.t_in_y.push_back(c);
    }
    return vf;
}

/// phi_i(Y_m) computed from theta pairings; equals -prod_{k != i}(alpha_m - xi_k).
inline ExactMatrix<Rational> phi_on_Y(const std::vector<Rational>& xi, const SolitonParams& params) {
    auto alpha = params.rational_alpha();
    auto vf = vertical_frame(params);
    std::size_t l = alpha.size();
    ExactMatrix<Rational> out = exact_zero<Rational>(l, l);
    for (std::size_t i = 0; i < l; ++i) {
        std::vector<Rational> rest;
        for (std::size_t k = 0; k < l; ++k)
            if (k != i) rest.push_back(xi[k]);
        auto e = elementary_syms(rest);
        std::vector<Rational> phi(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(l));
        for (std::size_t m = 0; m < l; ++m) out[i][m] = detail::pair(phi, vf.Y[m]);
    }
    return out;
}

/// g'_theta(Y_m, Y_n) = sum_i [prod_{k<l}(xi_i - alpha_k)/Delta(xi_i)] phi_i(Y_m) phi_i(Y_n).
inline ExactMatrix<Rational> gtheta_on_Y(const std::vector<Rational>& xi, const SolitonParams& params) {
    validate(params);
    auto alpha = params.rational_alpha();
    require_interior(xi, alpha);
    std::size_t l = alpha.size();
    auto ph = phi_on_Y(xi, params);
    ExactMatrix<Rational> out = exact_zero<Rational>(l, l);
    for (std::size_t i = 0; i < l; ++i) {
        Rational w(1);
        for (std::size_t k = 0; k + 1 < l; ++k) w *= xi[i] - alpha[k];
        w /= delta(xi, i);
        for (std::size_t m = 0; m < l; ++m)
            for (std::size_t n = 0; n < l; ++n) out[m][n] += w * ph[i][m] * ph[i][n];
    }
    return out;
}

/// beta_0^2 + sum_j (-p_nc(alpha_j)/Delta_j) beta_j^2 on the Y basis.
inline ExactMatrix<Rational> gbeta_on_Y(const std::vector<Rational>& xi, const SolitonParams& params) {
    validate(params);
    auto alpha = params.rational_alpha();
    require_interior(xi, alpha);
    std::size_t l = alpha.size();
    auto vf = vertical_frame(params);
    ExactMatrix<Rational> pairing = exact_zero<Rational>(l, l);  // pairing[i][m] = beta_i(Y_m)
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t m = 0; m < l; ++m) pairing[i][m] = detail::pair(vf.beta[i], vf.Y[m]);
    std::vector<Rational> weight{Rational(1)};
    for (std::size_t j = 0; j + 1 < l; ++j) weight.push_back(-pnc_eval(xi, alpha[j]) / vf.delta_head[j]);
    ExactMatrix<Rational> out = exact_zero<Rational>(l, l);
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t m = 0; m < l; ++m)
            for (std::size_t n = 0; n < l; ++n) out[m][n] += weight[i] * pairing[i][m] * pairing[i][n];
    return out;
}

/// G_rs = (-1)^{r+s} sum_j xi_j^{2l-r-s} / (Delta(xi_j) prod_{k<l}(xi_j - alpha_k)).
inline ExactMatrix<Rational> gxi_matrix(const std::vector<Rational>& xi, const SolitonParams& params) {
    validate(params);
    auto alpha = params.rational_alpha();
    require_interior(xi, alpha);
    int l = params.l();
    auto L = static_cast<std::size_t>(l);
    ExactMatrix<Rational> G = exact_zero<Rational>(L, L);
    std::vector<Rational> den(L);
    for (std::size_t j = 0; j < L; ++j) {
        den[j] = delta(xi, j);
        for (std::size_t k = 0; k + 1 < L; ++k) den[j] *= xi[j] - alpha[k];
    }
    for (int r = 1; r <= l; ++r)
        for (int s = 1; s <= l; ++s) {
            Rational sum(0);
            for (std::size_t j = 0; j < L; ++j) sum += detail::pow_q(xi[j], 2 * l - r - s) / den[j];
            G[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(s - 1)] = ((r + s) % 2 == 0) ? sum : Rational(-sum);
        }
    return G;
}

/// (dsigma_1)^2 + sum_i (-1/(Delta_i p_nc(alpha_i))) (dp_nc(alpha_i))^2 in the dsigma basis.
inline ExactMatrix<Rational> gxi_closed_form(const std::vector<Rational>& xi, const SolitonParams& params) {
    auto alpha = params.rational_alpha();
    require_interior(xi, alpha);
    int l = params.l();
    auto L = static_cast<std::size_t>(l);
    auto hd = detail::head(alpha);
    ExactMatrix<Rational> Q = exact_zero<Rational>(L, L);
    Q[0][0] = 1;
    for (std::size_t i = 0; i + 1 < L; ++i) {
        Rational w = Rational(-1) / (delta(hd, i) * pnc_eval(xi, alpha[i]));
        // dp_nc(alpha_i) = sum_r (-1)^r alpha_i^{l-r} dsigma_r
        std::vector<Rational> row(L);
        for (int r = 1; r <= l; ++r) {
            Rational v = detail::pow_q(alpha[i], l - r);
            row[static_cast<std::size_t>(r - 1)] = (r % 2 == 0) ? v : Rational(-v);
        }
        for (std::size_t r = 0; r < L; ++r)
            for (std::size_t s = 0; s < L; ++s) Q[r][s] += w * row[r] * row[s];
    }
    return Q;
}

/// J^T G J with J_rj = d sigma_r / d xi_j; equals diag(Delta(xi_j)/prod_{k<l}(xi_j - alpha_k)).
inline ExactMatrix<Rational> gxi_in_xi_basis(const std::vector<Rational>& xi, const SolitonParams& params) {
    auto G = gxi_matrix(xi, params);
    std::size_t l = xi.size();
    ExactMatrix<Rational> J = exact_zero<Rational>(l, l);
    for (std::size_t j = 0; j < l; ++j) {
        std::vector<Rational> rest;
        for (std::size_t k = 0; k < l; ++k)
            if (k != j) rest.push_back(xi[k]);
        auto e = elementary_syms(rest);
        for (std::size_t r = 0; r < l; ++r) J[r][j] = e[r];
    }
    return exact_multiply(exact_multiply(exact_transpose(J), G), J);
}

struct BetaClosedness {
    /// Coefficient of the generator on factor j in d beta_0 (all should vanish).
    std::vector<Rational> beta0;
    /// residual[i][j] = (coefficient of factor j in d beta_i) - (-1)^{l-i} 2 delta_ij.
    ExactMatrix<Rational> beta_i;
    /// Raw coefficients, for reporting.
    ExactMatrix<Rational> beta_i_raw;

    bool all_zero() const {
        for (const auto& v : beta0)
            if (v != 0) return false;
        for (const auto& row : beta_i)
            for (const auto& v : row)
                if (v != 0) return false;
        return true;
    }
};

/// Pairs the theta coefficients of each beta with the curvature coefficients
/// c_rj = (-1)^{l-j+r} 2 alpha_j^{l-r} / Delta_j of d theta_r.
inline BetaClosedness beta_closedness_coefficients(const SolitonParams& params) {
    auto vf = vertical_frame(params);
    auto alpha = params.rational_alpha();
    int l = params.l();
    auto L = static_cast<std::size_t>(l);
    ExactMatrix<Rational> C = exact_zero<Rational>(L, L - 1);
    for (int r = 1; r <= l; ++r)
        for (int j = 1; j <= l - 1; ++j) {
            Rational v = Rational(2) * detail::pow_q(alpha[static_cast<std::size_t>(j - 1)], l - r) /
                         vf.delta_head[static_cast<std::size_t>(j - 1)];
            C[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(j - 1)] = ((l - j + r) % 2 == 0) ? v : Rational(-v);
        }
    BetaClosedness out;
    for (std::size_t j = 0; j + 1 < L; ++j) {
        Rational s(0);
        for (std::size_t r = 0; r < L; ++r) s += vf.beta[0][r] * C[r][j];
        out.beta0.push_back(s);
    }
    out.beta_i = exact_zero<Rational>(L - 1, L - 1);
    out.beta_i_raw = exact_zero<Rational>(L - 1, L - 1);
    for (std::size_t i = 0; i + 1 < L; ++i)
        for (std::size_t j = 0; j + 1 < L; ++j) {
            Rational s(0);
            for (std::size_t r = 0; r < L; ++r) s += vf.beta[i + 1][r] * C[r][j];
            out.beta_i_raw[i][j] = s;
            Rational expected(0);
            if (i == j) expected = ((l - static_cast<int>(i + 1)) % 2 == 0) ? Rational(2) : Rational(-2);
            out.beta_i[i][j] = s - expected;
        }
    return out;
}

/// r_j^2 = -4 p_nc(alpha_j)/Delta_j(alpha_1..alpha_{l-1}), exactly.
inline std::vector<Rational> flat_radius_squared(const std::vector<Rational>& xi, const SolitonParams& params) {
    auto alpha = params.rational_alpha();
    require_interior(xi, alpha);
    auto hd = detail::head(alpha);
    std::vector<Rational> out;
    for (std::size_t j = 0; j < hd.size(); ++j) out.push_back(Rational(-4) * pnc_eval(xi, alpha[j]) / delta(hd, j));
    return out;
}

inline FlatCoords flat_coords(const std::vector<double>& xi, const SolitonParams& params) {
    ChartModel model(params);
    return model.flat_coords(model.at_xi(xi));
}

/// (1/4) sum_j r_j^2/(alpha_l - alpha_j) + sigma; positive on the domain.
inline double embedding_margin(const FlatCoords& fc, const SolitonParams& params) {
    auto alpha = params.alpha_double();
    double s = fc.sigma;
    for (std::size_t j = 0; j < fc.r.size(); ++j) s += 0.25 * fc.r[j] * fc.r[j] / (alpha.back() - alpha[j]);
    return s;
}

inline double flat_metric_curvature(const ChartPoint& p, const SolitonParams& params) {
    return ChartModel(params).curvature(p, Which::GPrime).norm_rm;
}

/// g'(T_j, T_j) for each j, with T_j acting on the angle coordinates by v_j.
inline std::vector<double> gprime_T_lengths(const ChartModel& model, const ChartPoint& p) {
    Eigen::MatrixXd G = model.metric(p, Which::GPrime);
    int l = model.l();
    std::vector<double> out;
    for (int j = 0; j < l; ++j) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(model.dim());
        for (int r = 0; r < l; ++r) v(model.t_index(r)) = model.lattice()(j, r);
        out.push_back(v.dot(G * v));
    }
    return out;
}

}  // namespace krsol
