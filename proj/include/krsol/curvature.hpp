#pragma once

// Christoffel symbols, Riemann and Ricci tensors of a metric given by its
// coordinate components and their first and second derivatives at a point.

#include "krsol/jet.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace krsol {

/// Metric value with first and second coordinate derivatives.
struct MetricJet {
    int dim = 0;
    Eigen::MatrixXd g;
    /// dg[(c*dim + a)*dim + b] = d_c g_ab
    std::vector<double> dg;
    /// d2g[((c*dim + d)*dim + a)*dim + b] = d_c d_d g_ab
    std::vector<double> d2g;

    double dG(int c, int a, int b) const { return dg[static_cast<std::size_t>((c * dim + a) * dim + b)]; }
    double d2G(int c, int d, int a, int b) const {
        return d2g[static_cast<std::size_t>(((c * dim + d) * dim + a) * dim + b)];
    }
};

inline MetricJet metric_jet_from(const std::vector<std::vector<Jet>>& g) {
    MetricJet m;
    m.dim = static_cast<int>(g.size());
    int n = m.dim;
    m.g.resize(n, n);
    m.dg.assign(static_cast<std::size_t>(n * n * n), 0.0);
    m.d2g.assign(static_cast<std::size_t>(n * n * n * n), 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const Jet& x = g[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
            m.g(a, b) = x.value();
            for (int c = 0; c < n; ++c) {
                m.dg[static_cast<std::size_t>((c * n + a) * n + b)] = x.d(c);
                for (int d = 0; d < n; ++d) m.d2g[static_cast<std::size_t>(((c * n + d) * n + a) * n + b)] = x.h(c, d);
            }
        }
    return m;
}

/// Central-difference jet of a metric function; an independent check on the AD path.
inline MetricJet metric_jet_fd(const std::function<Eigen::MatrixXd(const std::vector<double>&)>& metric,
                               const std::vector<double>& x, double step1 = 1e-6, double step2 = 1e-4) {
    MetricJet m;
    m.dim = static_cast<int>(x.size());
    int n = m.dim;
    m.g = metric(x);
    m.dg.assign(static_cast<std::size_t>(n * n * n), 0.0);
    m.d2g.assign(static_cast<std::size_t>(n * n * n * n), 0.0);
    auto shifted = [&](int i, double hi, int j, double hj) {
        std::vector<double> y(x);
        y[static_cast<std::size_t>(i)] += hi;
        y[static_cast<std::size_t>(j)] += hj;
        return metric(y);
    };
    for (int c = 0; c < n; ++c) {
        Eigen::MatrixXd diff = (shifted(c, step1, c, 0.0) - shifted(c, -step1, c, 0.0)) / (2.0 * step1);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) m.dg[static_cast<std::size_t>((c * n + a) * n + b)] = diff(a, b);
    }
    for (int c = 0; c < n; ++c)
        for (int d = c; d < n; ++d) {
            Eigen::MatrixXd second;
            if (c == d) {
                second = (shifted(c, step2, c, 0.0) - 2.0 * m.g + shifted(c, -step2, c, 0.0)) / (step2 * step2);
            } else {
                second = (shifted(c, step2, d, step2) - shifted(c, step2, d, -step2) - shifted(c, -step2, d, step2) +
                          shifted(c, -step2, d, -step2)) /
                         (4.0 * step2 * step2);
            }
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    m.d2g[static_cast<std::size_t>(((c * n + d) * n + a) * n + b)] = second(a, b);
                    m.d2g[static_cast<std::size_t>(((d * n + c) * n + a) * n + b)] = second(a, b);
                }
        }
    return m;
}

/// |T|_g for a symmetric or antisymmetric 2-tensor T with lower indices.
inline double tensor_norm(const Eigen::MatrixXd& g_inv, const Eigen::MatrixXd& t) {
    Eigen::MatrixXd raised = g_inv * t * g_inv;
    double s = (raised.array() * t.array()).sum();
    return std::sqrt(std::max(s, 0.0));
}

struct Curvature {
    int dim = 0;
    Eigen::MatrixXd g_inv;
    /// gamma[(e*dim + a)*dim + b] = Gamma^e_ab
    std::vector<double> gamma;
    /// riemann[((a*dim + b)*dim + c)*dim + d] = R_abcd (all indices down)
    std::vector<double> riemann;
    Eigen::MatrixXd ricci;
    double norm_rm = 0.0;
    double norm_ric = 0.0;
    double scalar = 0.0;
    double condition = 0.0;

    double Gamma(int e, int a, int b) const { return gamma[static_cast<std::size_t>((e * dim + a) * dim + b)]; }
    double R(int a, int b, int c, int d) const {
        return riemann[static_cast<std::size_t>(((a * dim + b) * dim + c) * dim + d)];
    }
};

/// Signs are such that the round sphere has R_abab > 0 and positive Ricci.
inline Curvature compute_curvature(const MetricJet& m) {
    int n = m.dim;
    Curvature out;
    out.dim = n;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.g);
    double lo = eig.eigenvalues().minCoeff();
    double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0)) throw std::domain_error("metric is not positive definite");
    out.condition = hi / lo;
    out.g_inv = m.g.inverse();
    out.g_inv = 0.5 * (out.g_inv + out.g_inv.transpose()).eval();

    auto idx3 = [n](int a, int b, int c) { return static_cast<std::size_t>((a * n + b) * n + c); };
    auto idx4 = [n](int a, int b, int c, int d) { return static_cast<std::size_t>(((a * n + b) * n + c) * n + d); };

    // First kind: Gamma_{c,ab} = (d_a g_bc + d_b g_ac - d_c g_ab)/2
    std::vector<double> first(static_cast<std::size_t>(n * n * n));
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) first[idx3(c, a, b)] = 0.5 * (m.dG(a, b, c) + m.dG(b, a, c) - m.dG(c, a, b));
    out.gamma.assign(static_cast<std::size_t>(n * n * n), 0.0);
    for (int e = 0; e < n; ++e)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double s = 0.0;
                for (int c = 0; c < n; ++c) s += out.g_inv(e, c) * first[idx3(c, a, b)];
                out.gamma[idx3(e, a, b)] = s;
            }

    // R_abcd = (g_ad,bc + g_bc,ad - g_ac,bd - g_bd,ac)/2
    //          + g_ef (Gamma^e_bc Gamma^f_ad - Gamma^e_bd Gamma^f_ac)
    out.riemann.assign(static_cast<std::size_t>(n * n * n * n), 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    double second = 0.5 * (m.d2G(b, c, a, d) + m.d2G(a, d, b, c) - m.d2G(b, d, a, c) - m.d2G(a, c, b, d));
                    double quad = 0.0;
                    for (int e = 0; e < n; ++e) {
                        double gbc = out.gamma[idx3(e, b, c)];
                        double gbd = out.gamma[idx3(e, b, d)];
                        for (int f = 0; f < n; ++f)
                            quad += m.g(e, f) * (gbc * out.gamma[idx3(f, a, d)] - gbd * out.gamma[idx3(f, a, c)]);
                    }
                    out.riemann[idx4(a, b, c, d)] = second + quad;
                }

    // Ric_bd = g^ac R_abcd
    out.ricci = Eigen::MatrixXd::Zero(n, n);
    for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) {
            double s = 0.0;
            for (int a = 0; a < n; ++a)
                for (int c = 0; c < n; ++c) s += out.g_inv(a, c) * out.riemann[idx4(a, b, c, d)];
            out.ricci(b, d) = s;
        }
    out.scalar = (out.g_inv.array() * out.ricci.array()).sum();

    // |Rm|^2 = R_abcd R^abcd, raising one index at a time.
    std::vector<double> cur = out.riemann;
    std::vector<double> next(cur.size());
    for (int slot = 0; slot < 4; ++slot) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d) {
                        int idx[4] = {a, b, c, d};
                        double s = 0.0;
                        for (int k = 0; k < n; ++k) {
                            int src[4] = {a, b, c, d};
                            src[slot] = k;
                            s += out.g_inv(idx[slot], k) * cur[idx4(src[0], src[1], src[2], src[3])];
                        }
                        next[idx4(a, b, c, d)] = s;
                    }
        std::swap(cur, next);
    }
    double rm2 = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i) rm2 += cur[i] * out.riemann[i];
    out.norm_rm = std::sqrt(std::max(rm2, 0.0));
    out.norm_ric = tensor_norm(out.g_inv, out.ricci);
    return out;
}

}  // namespace krsol
