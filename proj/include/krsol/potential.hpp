#pragma once

// The Kähler potential H of the l = 2 metric with alpha = (0, 1), a = 0:
//   H = xi_1^2/2 - xi_1 + xi_2^2/2 - xi_2 + int_0^{xi_2} dt/(1 + t + ... + t^{n-2}) + C.

#include "krsol/chartmetric.hpp"
#include "krsol/jet.hpp"
#include "krsol/poly.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace krsol {

struct PotentialSpec {
    double C = 3.0;
    int n = 3;
};

inline void validate(const PotentialSpec& spec) {
    if (spec.n < 2) throw std::invalid_argument("potential needs n >= 2");
    // x^2/2 - x + C/2 > x^2/4 for all x  <=>  C > 2
    if (!(spec.C > 2.0)) throw std::invalid_argument("potential constant must exceed 2");
}

/// The parameters the potential belongs to: l = 2, d = [n-2], alpha = (0, 1), a = 0.
inline SolitonParams potential_params(int n) {
    return make_params({n - 2}, {QuadNumber(0), QuadNumber(1)}, QuadNumber(0));
}

namespace detail {

/// 1 + t + ... + t^{n-2}
inline double geometric_sum(double t, int n) {
    double s = 0.0;
    for (int k = n - 2; k >= 0; --k) s = s * t + 1.0;
    return s;
}

inline double geometric_sum_derivative(double t, int n) {
    double s = 0.0;
    for (int k = n - 2; k >= 1; --k) s = s * t + k;
    return s;
}

}  // namespace detail

/// int_0^x dt/(1 + t + ... + t^{n-2}); closed forms for n <= 4.
inline double potential_integral(double x, int n) {
    switch (n) {
        case 2:
            return x;
        case 3:
            return std::log1p(x);
        case 4: {
            double s3 = std::sqrt(3.0);
            return (2.0 / s3) * (std::atan((2.0 * x + 1.0) / s3) - std::numbers::pi / 6.0);
        }
        default: {
            auto f = [n](double t) { return 1.0 / detail::geometric_sum(t, n); };
            double err = 0.0;
            return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, x, 20, 1e-14, &err);
        }
    }
}

inline double H(double xi1, double xi2, const PotentialSpec& spec) {
    validate(spec);
    if (xi1 > 0.0 || xi2 < 1.0) throw std::domain_error("potential is defined for xi_1 <= 0, xi_2 >= 1");
    return 0.5 * xi1 * xi1 - xi1 + 0.5 * xi2 * xi2 - xi2 + potential_integral(xi2, spec.n) + spec.C;
}

/// H as a jet in the chart coordinates (xi_1 = coordinate 0, xi_2 = coordinate 1).
inline Jet H_jet(const Jet& xi1, const Jet& xi2, const PotentialSpec& spec) {
    double v = xi2.value();
    double q = detail::geometric_sum(v, spec.n);
    double qd = detail::geometric_sum_derivative(v, spec.n);
    Jet integral = Jet::chain(xi2, potential_integral(v, spec.n), 1.0 / q, -qd / (q * q));
    return Jet(0.5) * xi1 * xi1 - xi1 + Jet(0.5) * xi2 * xi2 - xi2 + integral + Jet(spec.C);
}

/// dH = (xi_1 - 1) dxi_1 + xi_2^{n-1}/(1 + ... + xi_2^{n-2}) dxi_2
inline std::vector<double> dH_formula(double xi1, double xi2, int n) {
    return {xi1 - 1.0, std::pow(xi2, n - 1) / detail::geometric_sum(xi2, n)};
}

/// dd^c f as an antisymmetric coordinate matrix, with d^c f = J df.
template <class ScalarFn>
Eigen::MatrixXd ddc(const ChartModel& model, const ChartPoint& p, ScalarFn f) {
    auto x = model.coords(p);
    auto xj = model.jet_coords(x);
    Jet fj = f(xj);
    int dim = model.dim();
    // df as first-order jets: value d_i f, gradient row i of the Hessian.
    std::vector<Jet> df;
    for (int i = 0; i < dim; ++i) {
        Jet e(fj.d(i));
        for (int k = 0; k < dim; ++k) e += Jet(fj.h(i, k)) * (xj[static_cast<std::size_t>(k)] - Jet(x[static_cast<std::size_t>(k)]));
        df.push_back(e);
    }
    auto as = model.assemble<Jet>(xj, Which::G, true);
    auto dc = model.apply_J_form(as, df);
    Eigen::MatrixXd out(dim, dim);
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) out(a, b) = dc[static_cast<std::size_t>(b)].d(a) - dc[static_cast<std::size_t>(a)].d(b);
    return out;
}

inline Eigen::MatrixXd kahler_form(const ChartModel& model, const ChartPoint& p) {
    auto as = model.assemble<double>(model.coords(p), Which::G, true);
    return ChartModel::to_eigen(as.omega);
}

inline Eigen::MatrixXd ddc_H(const ChartModel& model, const ChartPoint& p, const PotentialSpec& spec) {
    return ddc(model, p, [&](const std::vector<Jet>& x) { return H_jet(x[0], x[1], spec); });
}

struct DdcResult {
    /// The factor calibrated once at the reference point.
    double factor = 1.0;
    /// The factor that would be chosen at this point; must equal `factor`.
    double local_factor = 1.0;
    double residual = 0.0;
};

/// The d^c normalization factor in {1, 2, 1/2} that best matches omega at p.
inline double calibrate_ddc_factor(const ChartModel& model, const ChartPoint& p, const PotentialSpec& spec) {
    Eigen::MatrixXd ddch = ddc_H(model, p, spec);
    Eigen::MatrixXd w = kahler_form(model, p);
    Eigen::MatrixXd gi = model.metric(p, Which::G).inverse();
    double best = 1.0, best_res = INFINITY;
    for (double k : {1.0, 2.0, 0.5}) {
        double r = tensor_norm(gi, k * ddch - w);
        if (r < best_res) {
            best_res = r;
            best = k;
        }
    }
    return best;
}

/// The factor chosen once at the reference point xi = (-1, 2), base at the chart center.
inline double ddc_factor(const PotentialSpec& spec) {
    static std::once_flag flag;
    static double factor = 1.0;
    std::call_once(flag, [&] {
        ChartModel m(potential_params(spec.n));
        factor = calibrate_ddc_factor(m, m.at_xi({-1.0, 2.0}), spec);
    });
    return factor;
}

/// Largest component of factor * dd^c H - omega, measured in g.
inline DdcResult ddc_check(const ChartModel& model, const ChartPoint& p, const PotentialSpec& spec) {
    DdcResult r;
    r.factor = ddc_factor(spec);
    r.local_factor = calibrate_ddc_factor(model, p, spec);
    Eigen::MatrixXd diff = r.factor * ddc_H(model, p, spec) - kahler_form(model, p);
    r.residual = tensor_norm(model.metric(p, Which::G).inverse(), diff);
    return r;
}

struct PotentialReport {
    /// min and max of H/(xi_1^2 + xi_2^2) over the samples.
    double ratio_min = INFINITY;
    double ratio_max = 0.0;
    /// min and max of H/rho^2 outside the compact core.
    double rho_ratio_min = INFINITY;
    double rho_ratio_max = 0.0;
    /// Global constant with (dH)^2 <= C' H g: max of |dH|_g^2 / H.
    double gradient_constant = 0.0;
    double min_H = INFINITY;
    std::size_t samples = 0;
};

/// Samples xi_1 in [-extent, 0], xi_2 in [1, 1 + extent] on a grid.
inline PotentialReport potential_properties(const PotentialSpec& spec, int grid, double extent = 100.0,
                                            double core_rho = 10.0) {
    validate(spec);
    ChartModel model(potential_params(spec.n));
    PotentialReport rep;
    for (int i = 0; i < grid; ++i)
        for (int k = 0; k < grid; ++k) {
            // Geometric spacing resolves both the core and the far field.
            double s1 = (grid == 1) ? 0.0 : static_cast<double>(i) / (grid - 1);
            double s2 = (grid == 1) ? 0.0 : static_cast<double>(k) / (grid - 1);
            double xi1 = -(std::pow(1.0 + extent, s1) - 1.0);
            double xi2 = std::pow(1.0 + extent, s2);
            double h = H(xi1, xi2, spec);
            rep.min_H = std::min(rep.min_H, h);
            double r2 = xi1 * xi1 + xi2 * xi2;
            rep.ratio_min = std::min(rep.ratio_min, h / r2);
            rep.ratio_max = std::max(rep.ratio_max, h / r2);
            double rho = xi2 - xi1;
            if (rho >= core_rho) {
                rep.rho_ratio_min = std::min(rep.rho_ratio_min, h / (rho * rho));
                rep.rho_ratio_max = std::max(rep.rho_ratio_max, h / (rho * rho));
            }
            ++rep.samples;
            // Interior points only for the metric bound (the chart is open).
            if (xi1 < 0.0 && xi2 > 1.0) {
                auto dh = dH_formula(xi1, xi2, spec.n);
                double grad2 = 0.0;
                // g is diagonal in (xi_1, xi_2) with entries A_1, A_2; |dH|^2 = sum dh_j^2 / A_j.
                ChartPoint p = model.at_xi({xi1, xi2});
                Eigen::MatrixXd G = model.metric(p, Which::G);
                Eigen::MatrixXd gi = G.inverse();
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) grad2 += dh[static_cast<std::size_t>(a)] * gi(a, b) * dh[static_cast<std::size_t>(b)];
                rep.gradient_constant = std::max(rep.gradient_constant, grad2 / h);
            }
        }
    return rep;
}

/// Exact certificate, n = 3, that the coefficients of dH are bounded by multiples of sqrt(H):
///  (xi_1 - 1)^2 <= 16 H follows from 4x^2 + 4 - (x - 1)^2 = 3x^2 + 2x + 3 > 0,
///  xi_2^2/(1 + xi_2) <= xi_2 <= 2 sqrt(H) follows from t^2(1+t)^2 - t^4 = 2t^3 + t^2 >= 0.
struct GradientCertificate {
    ExactPoly first;
    Rational first_discriminant;
    ExactPoly second;
    bool holds = false;
};

inline GradientCertificate gradient_certificate_n3() {
    GradientCertificate c;
    ExactPoly x = ExactPoly::monomial(1);
    ExactPoly one(Rational(1));
    ExactPoly xm1 = x - one;
    c.first = ExactPoly(Rational(4)) * x * x + ExactPoly(Rational(4)) - xm1 * xm1;
    const auto& f = c.first.coeffs();
    c.first_discriminant = f[1] * f[1] - Rational(4) * f[2] * f[0];
    ExactPoly tp1 = x + one;
    c.second = x * x * tp1 * tp1 - x * x * x * x;
    bool nonneg = true;
    for (const auto& k : c.second.coeffs())
        if (k < 0) nonneg = false;
    c.holds = c.first_discriminant < 0 && f[2] > 0 && nonneg;
    return c;
}

}  // namespace krsol
