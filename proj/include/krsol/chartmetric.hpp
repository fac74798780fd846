#pragma once

// The soliton metric g, its Kähler form and complex structure, and the locally
// flat comparison metric g' on an explicit chart of the dense open set:
// coordinates (xi_1..xi_l, t_1..t_l, base coordinates), where each projective
// factor CP^{d_j} is covered by its affine chart w in C^{d_j} written as real
// pairs (x_1, y_1, ..., x_d, y_d).

#include "krsol/coneinv.hpp"
#include "krsol/curvature.hpp"
#include "krsol/jet.hpp"
#include "krsol/params.hpp"
#include "krsol/symalg.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace krsol {

enum class Which { G, GPrime };

class ChartDomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct ChartPoint {
    std::vector<double> xi;
    std::vector<double> t;
    /// One affine-chart point per base factor j = 1..l-1 (empty when d_j = 0).
    std::vector<std::vector<std::complex<double>>> w;
};

/// Coefficients of theta_r and their exterior derivatives at a point.
struct ConnectionForms {
    /// theta[r] as a row over coordinates.
    std::vector<Eigen::VectorXd> theta;
    /// dtheta[r](a, b), antisymmetric.
    std::vector<Eigen::MatrixXd> dtheta;
    /// c[r][j]: dtheta_r = sum_j c[r][j] * (Fubini-Study generator on factor j).
    std::vector<std::vector<double>> c;
};

struct KahlerResiduals {
    double j_squared = 0.0;
    double compatibility = 0.0;
    double kahler_form = 0.0;
    double d_omega = 0.0;
    double moment_map = 0.0;

    double max() const {
        return std::max({j_squared, compatibility, kahler_form, d_omega, moment_map});
    }
};

struct CurvatureReport {
    Curvature curvature;
    double norm_rm = 0.0;
    double norm_ric = 0.0;
    double condition = 0.0;
};

struct FlatCoords {
    std::vector<double> r;
    double sigma = 0.0;
    /// The angle dual to beta_0 is never needed; kept as an explicit placeholder.
    double beta0_angle = 0.0;
};

struct DeviationReport {
    long double norm = 0.0L;
    long double closed_form = 0.0L;
};

namespace detail {

template <class T>
T cst(long double v) {
    if constexpr (std::is_same_v<T, Jet>)
        return Jet(static_cast<double>(v));
    else
        return static_cast<T>(v);
}

template <class T>
T horner_ld(const std::vector<long double>& c, const T& x) {
    T acc = cst<T>(0.0L);
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + cst<T>(c[k]);
    return acc;
}

inline double exp_of(double x) { return std::exp(x); }
inline long double exp_of(long double x) { return std::exp(x); }
inline Jet exp_of(const Jet& x) { return exp(x); }

template <class T>
std::vector<std::vector<T>> square(std::size_t n) {
    return std::vector<std::vector<T>>(n, std::vector<T>(n, cst<T>(0.0L)));
}

}  // namespace detail

class ChartModel {
public:
    /// Everything the assembly needs, as intermediate values at one point.
    template <class T>
    struct Assembly {
        std::vector<std::vector<T>> g;
        std::vector<std::vector<T>> omega;
        /// Rows over coordinates.
        std::vector<std::vector<T>> theta;
        std::vector<std::vector<T>> phi;
        std::vector<std::vector<T>> dsigma;
        std::vector<T> A;
        std::vector<T> F;
        std::vector<T> pc;
        std::vector<T> delta_xi;
        std::vector<T> pnc_alpha;
        /// Complex structure on the coframe (dxi_j, theta_r, base differentials),
        /// column convention: J e^k = sum_m Jc[m][k] e^m.
        std::vector<std::vector<T>> Jc;
        /// theta_r = dt_r + sum over base columns of N[r][col].
        std::vector<std::vector<T>> N;
    };

    explicit ChartModel(SolitonParams params) : params_(std::move(params)) {
        validate(params_);
        n_ = params_.n();
        l_ = params_.l();
        dim_ = 2 * n_;
        if (dim_ > kMaxVars) throw std::invalid_argument("chart dimension exceeds the AD capacity");
        auto s = build_structure<QuadNumber>(params_);
        for (const auto& x : params_.alpha) alpha_.push_back(x.to_long_double());
        a_ = params_.a.to_long_double();
        for (const auto& c : s.p_c.coeffs()) pc_.push_back(c.to_long_double());
        for (const auto& c : s.P.coeffs()) P_.push_back(c.to_long_double());
        P_alpha_l_ = s.F_l.P_at_alpha_l.to_long_double();
        int off = 2 * l_;
        for (int j = 0; j < l_ - 1; ++j) {
            QuadNumber dj(1);
            for (int k = 0; k < l_ - 1; ++k)
                if (k != j) dj *= s.alpha[static_cast<std::size_t>(j)] - s.alpha[static_cast<std::size_t>(k)];
            delta_alpha_.push_back(dj.to_long_double());
            // dtheta closes only when the base orientation alternates with j.
            eps_.push_back(((l_ - (j + 1)) % 2 == 1) ? 1.0L : -1.0L);
            int dcount = params_.d(static_cast<std::size_t>(j));
            base_offset_.push_back(dcount > 0 ? off : -1);
            off += 2 * dcount;
        }
        // c[r][j] = (-1)^{l-j+r} 2 alpha_j^{l-r} / Delta_j(alpha), r, j 1-based.
        c_.assign(static_cast<std::size_t>(l_), std::vector<long double>(static_cast<std::size_t>(l_ - 1), 0.0L));
        for (int r = 1; r <= l_; ++r)
            for (int j = 1; j <= l_ - 1; ++j) {
                long double v = 2.0L * std::pow(alpha_[static_cast<std::size_t>(j - 1)], static_cast<long double>(l_ - r)) /
                                delta_alpha_[static_cast<std::size_t>(j - 1)];
                if ((l_ - j + r) % 2 != 0) v = -v;
                c_[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(j - 1)] = v;
            }
        auto V = lattice_vectors(params_);
        Eigen::MatrixXd vm(l_, l_);
        for (int i = 0; i < l_; ++i)
            for (int k = 0; k < l_; ++k) vm(i, k) = V[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].to_double();
        torus_volume_ = std::fabs(vm.determinant());
        lattice_ = vm;
    }

    const SolitonParams& params() const { return params_; }
    int dim() const { return dim_; }
    int n() const { return n_; }
    int l() const { return l_; }
    const std::vector<long double>& alpha() const { return alpha_; }
    long double a() const { return a_; }
    long double eps(int j) const { return eps_[static_cast<std::size_t>(j)]; }
    double torus_volume() const { return torus_volume_; }
    /// Rows v_1..v_l.
    const Eigen::MatrixXd& lattice() const { return lattice_; }

    int xi_index(int j) const { return j; }
    int t_index(int r) const { return l_ + r; }
    /// Index of x_k in factor j, or -1 when the factor is a point.
    int base_index(int j, int k) const {
        int off = base_offset_[static_cast<std::size_t>(j)];
        return off < 0 ? -1 : off + 2 * k;
    }

    // ---- points -------------------------------------------------------------

    std::vector<double> coords(const ChartPoint& p) const {
        if (static_cast<int>(p.xi.size()) != l_ || static_cast<int>(p.t.size()) != l_)
            throw std::invalid_argument("chart point has wrong xi/t length");
        std::vector<double> x(static_cast<std::size_t>(dim_), 0.0);
        for (int j = 0; j < l_; ++j) {
            x[static_cast<std::size_t>(j)] = p.xi[static_cast<std::size_t>(j)];
            x[static_cast<std::size_t>(l_ + j)] = p.t[static_cast<std::size_t>(j)];
        }
        for (int j = 0; j < l_ - 1; ++j) {
            int dj = params_.d(static_cast<std::size_t>(j));
            if (dj == 0) continue;
            const auto* wj = static_cast<std::size_t>(j) < p.w.size() ? &p.w[static_cast<std::size_t>(j)] : nullptr;
            for (int k = 0; k < dj; ++k) {
                std::complex<double> z = (wj && static_cast<int>(wj->size()) > k) ? (*wj)[static_cast<std::size_t>(k)] : 0.0;
                x[static_cast<std::size_t>(base_index(j, k))] = z.real();
                x[static_cast<std::size_t>(base_index(j, k) + 1)] = z.imag();
            }
        }
        return x;
    }

    ChartPoint point(const std::vector<double>& x) const {
        ChartPoint p;
        for (int j = 0; j < l_; ++j) {
            p.xi.push_back(x[static_cast<std::size_t>(j)]);
            p.t.push_back(x[static_cast<std::size_t>(l_ + j)]);
        }
        p.w.resize(static_cast<std::size_t>(l_ - 1));
        for (int j = 0; j < l_ - 1; ++j)
            for (int k = 0; k < params_.d(static_cast<std::size_t>(j)); ++k)
                p.w[static_cast<std::size_t>(j)].emplace_back(x[static_cast<std::size_t>(base_index(j, k))],
                                                              x[static_cast<std::size_t>(base_index(j, k) + 1)]);
        return p;
    }

    /// The chart point with given xi, zero angles and base point at the chart center.
    ChartPoint at_xi(std::vector<double> xi) const {
        ChartPoint p;
        p.xi = std::move(xi);
        p.t.assign(static_cast<std::size_t>(l_), 0.0);
        p.w.resize(static_cast<std::size_t>(l_ - 1));
        for (int j = 0; j < l_ - 1; ++j)
            p.w[static_cast<std::size_t>(j)].assign(static_cast<std::size_t>(params_.d(static_cast<std::size_t>(j))), 0.0);
        return p;
    }

    /// xi_1 < alpha_1, alpha_{j-1} < xi_j < alpha_j, xi_l > alpha_l, and |w| < 10.
    std::optional<std::string> domain_violation(const ChartPoint& p) const {
        if (static_cast<int>(p.xi.size()) != l_) return "xi has wrong length";
        for (int j = 0; j < l_; ++j) {
            long double x = p.xi[static_cast<std::size_t>(j)];
            if (j < l_ - 1 && !(x < alpha_[static_cast<std::size_t>(j)]))
                return "xi_" + std::to_string(j + 1) + " must lie below alpha_" + std::to_string(j + 1);
            int below = (j == l_ - 1) ? j : j - 1;
            if (j > 0 && !(x > alpha_[static_cast<std::size_t>(below)]))
                return "xi_" + std::to_string(j + 1) + " must lie above alpha_" + std::to_string(below + 1);
        }
        for (std::size_t j = 0; j < p.w.size(); ++j) {
            double norm2 = 0.0;
            for (const auto& z : p.w[j]) norm2 += std::norm(z);
            if (!(norm2 < 100.0)) return "base point outside the affine chart radius";
        }
        return std::nullopt;
    }

    void require_domain(const ChartPoint& p) const {
        if (auto v = domain_violation(p)) throw ChartDomainError(*v);
    }

    // ---- assembly -----------------------------------------------------------

    template <class T>
    Assembly<T> assemble(const std::vector<T>& x, Which which, bool with_structure = true) const {
        using detail::cst;
        auto dim = static_cast<std::size_t>(dim_);
        auto l = static_cast<std::size_t>(l_);
        Assembly<T> out;
        std::vector<T> xi(x.begin(), x.begin() + l_);

        std::vector<std::vector<T>> sig_hat(l);
        for (std::size_t j = 0; j < l; ++j) {
            std::vector<T> rest;
            for (std::size_t i = 0; i < l; ++i)
                if (i != j) rest.push_back(xi[i]);
            sig_hat[j] = elementary_syms(rest);
        }

        out.pnc_alpha.resize(l - 1, cst<T>(1.0L));
        for (std::size_t j = 0; j + 1 < l; ++j)
            for (std::size_t i = 0; i < l; ++i) out.pnc_alpha[j] *= cst<T>(alpha_[j]) - xi[i];

        out.delta_xi.resize(l, cst<T>(1.0L));
        out.pc.resize(l);
        out.F.resize(l);
        out.A.resize(l);
        for (std::size_t j = 0; j < l; ++j) {
            for (std::size_t i = 0; i < l; ++i)
                if (i != j) out.delta_xi[j] *= xi[j] - xi[i];
            out.pc[j] = detail::horner_ld(pc_, xi[j]);
            T Pj = detail::horner_ld(P_, xi[j]);
            if (j + 1 == l && which == Which::G && a_ != 0.0L) {
                T e = detail::exp_of(cst<T>(2.0L * a_) * (cst<T>(alpha_.back()) - xi[j]));
                out.F[j] = Pj - e * cst<T>(P_alpha_l_);
            } else if (j + 1 == l && which == Which::G) {
                out.F[j] = Pj - cst<T>(P_alpha_l_);
            } else {
                out.F[j] = Pj;
            }
            out.A[j] = out.pc[j] * out.delta_xi[j] / out.F[j];
        }

        // Local primitives mu_j of the Fubini-Study generator; N holds their
        // contribution to theta_r.
        out.N = detail::square<T>(l);
        for (auto& row : out.N) row.assign(dim, cst<T>(0.0L));
        std::vector<std::vector<T>> mu(l - 1, std::vector<T>(dim, cst<T>(0.0L)));
        std::vector<T> s(l - 1, cst<T>(1.0L));
        for (std::size_t j = 0; j + 1 < l; ++j) {
            int dj = params_.d(j);
            for (int k = 0; k < dj; ++k) {
                auto ix = static_cast<std::size_t>(base_index(static_cast<int>(j), k));
                s[j] += x[ix] * x[ix] + x[ix + 1] * x[ix + 1];
            }
            T inv = cst<T>(1.0L) / s[j];
            for (int k = 0; k < dj; ++k) {
                auto ix = static_cast<std::size_t>(base_index(static_cast<int>(j), k));
                mu[j][ix] = -x[ix + 1] * inv;
                mu[j][ix + 1] = x[ix] * inv;
            }
        }
        out.theta.assign(l, std::vector<T>(dim, cst<T>(0.0L)));
        for (std::size_t r = 0; r < l; ++r) {
            out.theta[r][l + r] = cst<T>(1.0L);
            for (std::size_t j = 0; j + 1 < l; ++j) {
                if (params_.d(j) == 0) continue;
                T c = cst<T>(c_[r][j]);
                for (std::size_t col = 2 * l; col < dim; ++col) {
                    T term = c * mu[j][col];
                    out.theta[r][col] += term;
                    out.N[r][col] += term;
                }
            }
        }
        out.phi.assign(l, std::vector<T>(dim, cst<T>(0.0L)));
        for (std::size_t j = 0; j < l; ++j)
            for (std::size_t r = 0; r < l; ++r)
                for (std::size_t col = l; col < dim; ++col) out.phi[j][col] += sig_hat[j][r] * out.theta[r][col];

        // g
        out.g = detail::square<T>(dim);
        for (std::size_t j = 0; j < l; ++j) {
            out.g[j][j] += out.A[j];
            T invA = cst<T>(1.0L) / out.A[j];
            for (std::size_t a = l; a < dim; ++a) {
                T pa = invA * out.phi[j][a];
                for (std::size_t b = l; b < dim; ++b) out.g[a][b] += pa * out.phi[j][b];
            }
        }
        std::vector<T> K(l - 1);
        for (std::size_t j = 0; j + 1 < l; ++j) {
            K[j] = cst<T>(-4.0L / delta_alpha_[j]) * out.pnc_alpha[j];
            add_base_block(out.g, x, static_cast<int>(j), K[j], s[j], false);
        }

        if (!with_structure) return out;

        // omega = sum_r dsigma_r ^ theta_r + sum_j eps_j B_j (Fubini-Study generator)
        out.dsigma.assign(l, std::vector<T>(dim, cst<T>(0.0L)));
        for (std::size_t r = 0; r < l; ++r)
            for (std::size_t j = 0; j < l; ++j) out.dsigma[r][j] = sig_hat[j][r];
        out.omega = detail::square<T>(dim);
        for (std::size_t r = 0; r < l; ++r)
            for (std::size_t a = 0; a < l; ++a)
                for (std::size_t b = l; b < dim; ++b) {
                    T v = out.dsigma[r][a] * out.theta[r][b];
                    out.omega[a][b] += v;
                    out.omega[b][a] -= v;
                }
        for (std::size_t j = 0; j + 1 < l; ++j)
            add_base_block(out.omega, x, static_cast<int>(j), cst<T>(eps_[j]) * K[j], s[j], true);

        // Complex structure on the coframe.
        out.Jc = detail::square<T>(dim);
        for (std::size_t j = 0; j < l; ++j) {
            T invA = cst<T>(1.0L) / out.A[j];
            T ratio = out.pc[j] / out.F[j];
            for (std::size_t r = 1; r <= l; ++r) {
                out.Jc[l + r - 1][j] = invA * sig_hat[j][r - 1];
                T pw = cst<T>(1.0L);
                for (std::size_t k = 0; k < l - r; ++k) pw *= xi[j];
                T v = ratio * pw;
                out.Jc[j][l + r - 1] = (r % 2 == 0) ? v : cst<T>(0.0L) - v;
            }
        }
        for (std::size_t j = 0; j + 1 < l; ++j)
            for (int k = 0; k < params_.d(j); ++k) {
                auto ix = static_cast<std::size_t>(base_index(static_cast<int>(j), k));
                out.Jc[ix + 1][ix] = cst<T>(eps_[j]);
                out.Jc[ix][ix + 1] = cst<T>(-eps_[j]);
            }
        return out;
    }

    /// Applies the complex structure to a 1-form given by coordinate components.
    template <class T>
    std::vector<T> apply_J_form(const Assembly<T>& as, const std::vector<T>& a) const {
        auto dim = static_cast<std::size_t>(dim_);
        auto l = static_cast<std::size_t>(l_);
        // Coordinates -> coframe: b = (I - N^T) a, since E = I + N with N^2 = 0.
        std::vector<T> b(a);
        for (std::size_t col = 2 * l; col < dim; ++col)
            for (std::size_t r = 0; r < l; ++r) b[col] -= as.N[r][col] * a[l + r];
        std::vector<T> c(dim, detail::cst<T>(0.0L));
        for (std::size_t m = 0; m < dim; ++m)
            for (std::size_t k = 0; k < dim; ++k) c[m] += as.Jc[m][k] * b[k];
        // Coframe -> coordinates: E^T c.
        std::vector<T> out(c);
        for (std::size_t col = 2 * l; col < dim; ++col)
            for (std::size_t r = 0; r < l; ++r) out[col] += as.N[r][col] * c[l + r];
        return out;
    }

    Eigen::MatrixXd metric(const std::vector<double>& x, Which which) const {
        auto as = assemble<double>(x, which, false);
        return to_eigen(as.g);
    }
    Eigen::MatrixXd metric(const ChartPoint& p, Which which) const {
        require_domain(p);
        return metric(coords(p), which);
    }

    Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> metric_ld(const ChartPoint& p, Which which) const {
        require_domain(p);
        auto x = coords(p);
        std::vector<long double> xl(x.begin(), x.end());
        auto as = assemble<long double>(xl, which, false);
        Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> m(dim_, dim_);
        for (int a = 0; a < dim_; ++a)
            for (int b = 0; b < dim_; ++b) m(a, b) = as.g[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
        return m;
    }

    std::vector<Jet> jet_coords(const std::vector<double>& x) const {
        std::vector<Jet> v;
        for (int i = 0; i < dim_; ++i) v.push_back(Jet::variable(x[static_cast<std::size_t>(i)], i, dim_));
        return v;
    }

    MetricJet metric_jet(const ChartPoint& p, Which which) const {
        require_domain(p);
        auto as = assemble<Jet>(jet_coords(coords(p)), which, false);
        return metric_jet_from(as.g);
    }

    /// Complex structure on tangent vectors: J = -E^{-1} Jc^T E.
    Eigen::MatrixXd complex_structure(const ChartPoint& p, Which which = Which::G) const {
        require_domain(p);
        auto as = assemble<double>(coords(p), which, true);
        return complex_structure(as);
    }

    Eigen::MatrixXd complex_structure(const Assembly<double>& as) const {
        Eigen::MatrixXd E = Eigen::MatrixXd::Identity(dim_, dim_);
        for (int r = 0; r < l_; ++r)
            for (int col = 2 * l_; col < dim_; ++col) E(l_ + r, col) = as.N[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
        Eigen::MatrixXd Jc = to_eigen(as.Jc);
        return -E.inverse() * Jc.transpose() * E;
    }

    // ---- operations ---------------------------------------------------------

    ConnectionForms local_connection_forms(const ChartPoint& p) const {
        require_domain(p);
        auto as = assemble<Jet>(jet_coords(coords(p)), Which::G, false);
        ConnectionForms cf;
        for (int r = 0; r < l_; ++r) {
            Eigen::VectorXd row(dim_);
            Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim_, dim_);
            for (int b = 0; b < dim_; ++b) {
                const Jet& e = as.theta[static_cast<std::size_t>(r)][static_cast<std::size_t>(b)];
                row(b) = e.value();
                for (int a = 0; a < dim_; ++a) {
                    d(a, b) += e.d(a);
                    d(b, a) -= e.d(a);
                }
            }
            cf.theta.push_back(row);
            cf.dtheta.push_back(d);
            std::vector<double> cr;
            for (int j = 0; j < l_ - 1; ++j) cr.push_back(static_cast<double>(c_[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)]));
            cf.c.push_back(cr);
        }
        return cf;
    }

    /// The Fubini-Study generator on factor j as an antisymmetric coordinate matrix.
    Eigen::MatrixXd fubini_study_form(const ChartPoint& p, int j) const {
        auto x = coords(p);
        std::vector<std::vector<double>> m = detail::square<double>(static_cast<std::size_t>(dim_));
        double s = 1.0;
        for (int k = 0; k < params_.d(static_cast<std::size_t>(j)); ++k) {
            auto ix = static_cast<std::size_t>(base_index(j, k));
            s += x[ix] * x[ix] + x[ix + 1] * x[ix + 1];
        }
        add_base_block(m, x, j, 1.0, s, true);
        return to_eigen(m);
    }

    KahlerResiduals kahler_structure_check(const ChartPoint& p, Which which = Which::G) const {
        require_domain(p);
        auto x = coords(p);
        auto as = assemble<double>(x, which, true);
        Eigen::MatrixXd G = to_eigen(as.g);
        Eigen::MatrixXd W = to_eigen(as.omega);
        Eigen::MatrixXd J = complex_structure(as);
        Eigen::MatrixXd Gi = G.inverse();
        KahlerResiduals r;
        Eigen::MatrixXd I = Eigen::MatrixXd::Identity(dim_, dim_);
        Eigen::MatrixXd JJ = J * J + I;
        // (1,1)-tensor norm: tr(T^T G T G^{-1})
        r.j_squared = std::sqrt(std::max(0.0, (JJ.transpose() * G * JJ * Gi).trace()));
        r.compatibility = tensor_norm(Gi, J.transpose() * G * J - G);
        r.kahler_form = tensor_norm(Gi, W - J.transpose() * G);

        auto asj = assemble<Jet>(jet_coords(x), which, true);
        r.d_omega = three_form_norm(Gi, exterior_derivative(asj.omega));
        double mm = 0.0;
        for (int rr = 0; rr < l_; ++rr) {
            Eigen::VectorXd diff(dim_);
            for (int b = 0; b < dim_; ++b)
                diff(b) = W(t_index(rr), b) + as.dsigma[static_cast<std::size_t>(rr)][static_cast<std::size_t>(b)];
            mm = std::max(mm, std::sqrt(std::max(0.0, diff.dot(Gi * diff))));
        }
        r.moment_map = mm;
        return r;
    }

    CurvatureReport curvature(const ChartPoint& p, Which which) const {
        CurvatureReport rep;
        rep.curvature = compute_curvature(metric_jet(p, which));
        rep.norm_rm = rep.curvature.norm_rm;
        rep.norm_ric = rep.curvature.norm_ric;
        rep.condition = rep.curvature.condition;
        return rep;
    }

    /// |Ric + s (1/2) L_X g| for X = grad(a sigma_1), so (1/2) L_X g = Hess(a sigma_1),
    /// with the sign s fixed once by the first evaluation that has a > 0.
    double soliton_residual(const ChartPoint& p) const {
        auto rep = curvature(p, Which::G);
        if (a_ == 0.0L) return rep.norm_ric;
        Eigen::MatrixXd hess = soliton_hessian(rep.curvature);
        const Eigen::MatrixXd& gi = rep.curvature.g_inv;
        int sign = calibrated_soliton_sign([&] {
            double plus = tensor_norm(gi, rep.curvature.ricci + hess);
            double minus = tensor_norm(gi, rep.curvature.ricci - hess);
            return plus <= minus ? 1 : -1;
        });
        return tensor_norm(gi, rep.curvature.ricci + static_cast<double>(sign) * hess);
    }

    /// Both sign conventions, for reporting.
    std::pair<double, double> soliton_residual_both(const ChartPoint& p) const {
        return {soliton_residual_scaled(p, 1.0), soliton_residual_scaled(p, -1.0)};
    }

    /// |Ric + s Hess(a sigma_1)| for an arbitrary scale s.
    double soliton_residual_scaled(const ChartPoint& p, double s) const {
        auto rep = curvature(p, Which::G);
        Eigen::MatrixXd hess = soliton_hessian(rep.curvature);
        return tensor_norm(rep.curvature.g_inv, rep.curvature.ricci + s * hess);
    }

    /// Hess(a sigma_1)_ab = -a sum_{c over xi} Gamma^c_ab, since sigma_1 is linear in xi.
    Eigen::MatrixXd soliton_hessian(const Curvature& c) const {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim_, dim_);
        for (int a = 0; a < dim_; ++a)
            for (int b = 0; b < dim_; ++b) {
                double s = 0.0;
                for (int k = 0; k < l_; ++k) s += c.Gamma(k, a, b);
                h(a, b) = -static_cast<double>(a_) * s;
            }
        return h;
    }

    static int& soliton_sign_storage() {
        static int sign = 0;
        return sign;
    }
    static std::once_flag& soliton_sign_flag() {
        static std::once_flag flag;
        return flag;
    }
    template <class Pick>
    static int calibrated_soliton_sign(Pick pick) {
        std::call_once(soliton_sign_flag(), [&] { soliton_sign_storage() = pick(); });
        return soliton_sign_storage();
    }
    /// 0 until calibrated.
    static int soliton_sign() { return soliton_sign_storage(); }

    FlatCoords flat_coords(const ChartPoint& p) const {
        require_domain(p);
        FlatCoords fc;
        long double sigma = 0.0L;
        for (int j = 0; j < l_; ++j) sigma += static_cast<long double>(p.xi[static_cast<std::size_t>(j)]) - alpha_[static_cast<std::size_t>(j)];
        fc.sigma = static_cast<double>(sigma);
        for (int j = 0; j < l_ - 1; ++j) {
            long double pn = 1.0L;
            for (int i = 0; i < l_; ++i) pn *= alpha_[static_cast<std::size_t>(j)] - p.xi[static_cast<std::size_t>(i)];
            long double rad = -pn / delta_alpha_[static_cast<std::size_t>(j)];
            if (rad < 0.0L) throw ChartDomainError("negative radicand in flat coordinates");
            fc.r.push_back(static_cast<double>(2.0L * std::sqrt(rad)));
        }
        return fc;
    }

    /// (xi_l - xi_1, sqrt(sum r_j^2 + sigma^2))
    std::pair<double, double> rho_surrogate(const ChartPoint& p) const {
        auto fc = flat_coords(p);
        double s = fc.sigma * fc.sigma;
        for (double r : fc.r) s += r * r;
        return {p.xi.back() - p.xi.front(), std::sqrt(s)};
    }

    /// |g - g'|_g by direct tensor assembly, with the closed-form block value.
    DeviationReport g_gprime_deviation(const ChartPoint& p) const {
        require_domain(p);
        auto x = coords(p);
        std::vector<long double> xl(x.begin(), x.end());
        auto as = assemble<long double>(xl, Which::G, false);
        auto dim = static_cast<std::size_t>(dim_);
        auto last = static_cast<std::size_t>(l_ - 1);
        long double xil = xl[last];
        long double P = detail::horner_ld(P_, xil);
        long double gap = std::exp(2.0L * a_ * (alpha_.back() - xil)) * P_alpha_l_;  // P - F_l
        long double F = P - gap;
        long double pcd = as.pc[last] * as.delta_xi[last];
        using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
        MatL G(dim_, dim_), H = MatL::Zero(dim_, dim_);
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b) G(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = as.g[a][b];
        // A_l - A'_l = p_c Delta (P - F)/(F P); 1/A_l - 1/A'_l = (F - P)/(p_c Delta)
        H(static_cast<Eigen::Index>(last), static_cast<Eigen::Index>(last)) = pcd * gap / (F * P);
        long double coef = -gap / pcd;
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b)
                H(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += coef * as.phi[last][a] * as.phi[last][b];
        MatL M = G.ldlt().solve(H);
        DeviationReport rep;
        rep.norm = std::sqrt(std::max(0.0L, (M * M).trace()));
        long double u = gap / P;
        long double v = gap / F;
        rep.closed_form = std::sqrt(u * u + v * v);
        return rep;
    }

    /// F_l(t) in long double.
    long double F_l(long double t) const {
        return detail::horner_ld(P_, t) - std::exp(2.0L * a_ * (alpha_.back() - t)) * P_alpha_l_;
    }
    long double p_c(long double t) const { return detail::horner_ld(pc_, t); }
    long double P(long double t) const { return detail::horner_ld(P_, t); }

    /// Volume density of the (xi)-slice at the base chart center, after the
    /// torus and projective factors are integrated out.
    double reduced_volume_density(const std::vector<double>& xi, Which which) const {
        ChartPoint p = at_xi(xi);
        Eigen::MatrixXd G = metric(coords(p), which);
        double root_det = std::sqrt(std::max(0.0, G.determinant()));
        double base = 1.0;
        for (int j = 0; j < l_ - 1; ++j) {
            int d = params_.d(static_cast<std::size_t>(j));
            // Volume of CP^d in the metric with holomorphic sectional curvature 4.
            double v = 1.0;
            for (int k = 1; k <= d; ++k) v *= std::numbers::pi / k;
            base *= v;
        }
        return torus_volume_ * base * root_det;
    }

    template <class Rng>
    ChartPoint random_point(Rng& rng, double spread = 3.0, double base_radius = 1.0) const {
        std::uniform_real_distribution<double> u01(0.05, 0.95);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        std::uniform_real_distribution<double> base(-base_radius, base_radius);
        ChartPoint p;
        for (int j = 0; j < l_; ++j) {
            double lo, hi;
            if (j == 0) {
                hi = static_cast<double>(alpha_[0]);
                lo = hi - spread;
            } else if (j == l_ - 1) {
                lo = static_cast<double>(alpha_.back());
                hi = lo + spread;
            } else {
                lo = static_cast<double>(alpha_[static_cast<std::size_t>(j - 1)]);
                hi = static_cast<double>(alpha_[static_cast<std::size_t>(j)]);
            }
            p.xi.push_back(lo + (hi - lo) * u01(rng));
            p.t.push_back(angle(rng));
        }
        p.w.resize(static_cast<std::size_t>(l_ - 1));
        for (int j = 0; j < l_ - 1; ++j)
            for (int k = 0; k < params_.d(static_cast<std::size_t>(j)); ++k)
                p.w[static_cast<std::size_t>(j)].emplace_back(base(rng) / std::sqrt(2.0 * std::max(1, params_.d(static_cast<std::size_t>(j)))),
                                                              base(rng) / std::sqrt(2.0 * std::max(1, params_.d(static_cast<std::size_t>(j)))));
        return p;
    }

    // ---- helpers ------------------------------------------------------------

    template <class T>
    static Eigen::MatrixXd to_eigen(const std::vector<std::vector<T>>& m) {
        Eigen::MatrixXd e(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(m.size()));
        for (std::size_t a = 0; a < m.size(); ++a)
            for (std::size_t b = 0; b < m.size(); ++b)
                e(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = static_cast<double>(value_of(m[a][b]));
        return e;
    }

    /// (d beta)_{abc} for a 2-form given as jets: d_a b_bc + d_b b_ca + d_c b_ab.
    std::vector<double> exterior_derivative(const std::vector<std::vector<Jet>>& beta) const {
        auto n = static_cast<std::size_t>(dim_);
        std::vector<double> d(n * n * n, 0.0);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c)
                    d[(a * n + b) * n + c] = beta[b][c].d(static_cast<int>(a)) + beta[c][a].d(static_cast<int>(b)) +
                                             beta[a][b].d(static_cast<int>(c));
        return d;
    }

    /// Full contraction norm sqrt(w_abc w^abc) of a 3-form.
    double three_form_norm(const Eigen::MatrixXd& gi, const std::vector<double>& w) const {
        auto n = static_cast<std::size_t>(dim_);
        std::vector<double> cur(w), next(w.size());
        for (int slot = 0; slot < 3; ++slot) {
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    for (std::size_t c = 0; c < n; ++c) {
                        std::size_t id[3] = {a, b, c};
                        double s = 0.0;
                        for (std::size_t k = 0; k < n; ++k) {
                            std::size_t src[3] = {a, b, c};
                            src[slot] = k;
                            s += gi(static_cast<Eigen::Index>(id[slot]), static_cast<Eigen::Index>(k)) * cur[(src[0] * n + src[1]) * n + src[2]];
                        }
                        next[(a * n + b) * n + c] = s;
                    }
            std::swap(cur, next);
        }
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) s += cur[i] * w[i];
        return std::sqrt(std::max(0.0, s));
    }

private:
    /// Adds coef * (Fubini-Study block of factor j) to m: the metric block
    /// [[Re H, Im H], [-Im H, Re H]] or, with as_form, the Kähler form block
    /// [[-Im H, Re H], [-Re H, -Im H]], where H_ab = delta_ab/s - conj(w_a) w_b/s^2.
    template <class T>
    void add_base_block(std::vector<std::vector<T>>& m, const std::vector<T>& x, int j, const T& coef, const T& s,
                        bool as_form) const {
        int dj = params_.d(static_cast<std::size_t>(j));
        if (dj == 0) return;
        using detail::cst;
        T inv = cst<T>(1.0L) / s;
        T inv2 = inv * inv;
        for (int a = 0; a < dj; ++a)
            for (int b = 0; b < dj; ++b) {
                auto ia = static_cast<std::size_t>(base_index(j, a));
                auto ib = static_cast<std::size_t>(base_index(j, b));
                const T& xa = x[ia];
                const T& ya = x[ia + 1];
                const T& xb = x[ib];
                const T& yb = x[ib + 1];
                T re = cst<T>(0.0L) - (xa * xb + ya * yb) * inv2;
                if (a == b) re += inv;
                T im = cst<T>(0.0L) - (xa * yb - ya * xb) * inv2;
                T cre = coef * re;
                T cim = coef * im;
                if (!as_form) {
                    m[ia][ib] += cre;
                    m[ia][ib + 1] += cim;
                    m[ia + 1][ib] -= cim;
                    m[ia + 1][ib + 1] += cre;
                } else {
                    m[ia][ib] -= cim;
                    m[ia][ib + 1] += cre;
                    m[ia + 1][ib] -= cre;
                    m[ia + 1][ib + 1] -= cim;
                }
            }
    }

    SolitonParams params_;
    int n_ = 0;
    int l_ = 0;
    int dim_ = 0;
    std::vector<long double> alpha_;
    long double a_ = 0.0L;
    std::vector<long double> pc_;
    std::vector<long double> P_;
    long double P_alpha_l_ = 0.0L;
    std::vector<long double> delta_alpha_;
    std::vector<long double> eps_;
    std::vector<int> base_offset_;
    std::vector<std::vector<long double>> c_;
    double torus_volume_ = 0.0;
    Eigen::MatrixXd lattice_;
};

}  // namespace krsol
