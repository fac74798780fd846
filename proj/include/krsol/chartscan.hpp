#pragma once

// Large-scale numerics on the chart: region classification, connecting-curve
// lengths, curvature decay along rays, and volume growth.

#include "krsol/chartmetric.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace krsol {

enum class Region { Regular, Singular };

inline const char* to_string(Region r) { return r == Region::Regular ? "Regular" : "Singular"; }

struct RegionTag {
    double alpha_exp = 0.5;
    double c = 1.0;
    Region tag = Region::Singular;
};

/// Regular iff xi_l > c (xi_l - xi_1)^alpha_exp; ties are Singular.
inline RegionTag region_classify(const std::vector<double>& xi, double alpha_exp, double c) {
    if (!(alpha_exp > 0.0 && alpha_exp < 1.0)) throw std::invalid_argument("region exponent must lie in (0, 1)");
    if (!(c > 0.0)) throw std::invalid_argument("region constant must be positive");
    double rho = xi.back() - xi.front();
    RegionTag t{alpha_exp, c, Region::Singular};
    if (xi.back() > c * std::pow(rho, alpha_exp)) t.tag = Region::Regular;
    return t;
}
inline RegionTag region_classify(const ChartPoint& p, double alpha_exp, double c) {
    return region_classify(p.xi, alpha_exp, c);
}

enum class CurveTarget { Regular, XiLEqualsAlphaL };

struct CurveOptions {
    double alpha_exp = 0.5;
    double c = 1.0;
    double tolerance = 1e-10;
};

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Upper end xi_{l,1} > xi_{l,0} of the curve into the Regular region:
/// the root of s = (c + 1/2)(s - xi_1)^alpha_exp, by bisection.
inline double curve_upper_end(const std::vector<double>& xi, double alpha_exp, double c) {
    double x1 = xi.front();
    double lo = xi.back();
    auto f = [&](double s) { return s - (c + 0.5) * std::pow(s - x1, alpha_exp); };
    if (f(lo) > 0.0) return lo;
    double hi = std::max(2.0 * std::fabs(lo), 1.0);
    while (f(hi) <= 0.0) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? hi : lo) = mid;
    }
    return hi;
}

/// Integrand sqrt(p_c(t) prod_{k<l}(t - xi_k) / F_l(t)) of the curve moving xi_l only.
inline long double curve_integrand(const ChartModel& model, const std::vector<double>& xi, long double t) {
    long double num = model.p_c(t);
    for (std::size_t k = 0; k + 1 < xi.size(); ++k) num *= t - static_cast<long double>(xi[k]);
    long double den = model.F_l(t);
    return std::sqrt(std::max(0.0L, num / den));
}

/// Length of the curve from x0 moving only xi_l, to the Regular region or down to xi_l = alpha_l.
inline double connecting_curve_length(const ChartModel& model, const ChartPoint& p, CurveTarget target,
                                      const CurveOptions& opt = {}) {
    model.require_domain(p);
    double al = static_cast<double>(model.alpha().back());
    double x0 = p.xi.back();
    double lo, hi;
    if (target == CurveTarget::XiLEqualsAlphaL) {
        lo = al;
        hi = x0;
    } else {
        if (region_classify(p, opt.alpha_exp, opt.c).tag != Region::Singular)
            throw std::invalid_argument("the connecting curve must start at a Singular point");
        lo = x0;
        hi = curve_upper_end(p.xi, opt.alpha_exp, opt.c);
    }
    if (hi <= lo) return 0.0;
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    double value = 0.0;
    if (lo == al) {
        // t = alpha_l + u^2 removes the inverse square-root singularity at alpha_l.
        double umax = std::sqrt(hi - al);
        auto g = [&](double u) {
            long double t = static_cast<long double>(al) + static_cast<long double>(u) * u;
            if (u == 0.0) {
                // limit 2u/sqrt(F_l) -> 2/sqrt(F_l'(alpha_l))
                long double h = 1e-7L;
                long double slope = (model.F_l(al + h) - model.F_l(al)) / h;
                long double num = model.p_c(al);
                for (std::size_t k = 0; k + 1 < p.xi.size(); ++k) num *= static_cast<long double>(al) - p.xi[k];
                return static_cast<double>(2.0L * std::sqrt(std::max(0.0L, num / slope)));
            }
            return static_cast<double>(2.0L * static_cast<long double>(u) * curve_integrand(model, p.xi, t));
        };
        value = gauss_kronrod<double, 61>::integrate(g, 0.0, umax, 15, opt.tolerance, &err);
    } else {
        auto g = [&](double t) { return static_cast<double>(curve_integrand(model, p.xi, t)); };
        value = gauss_kronrod<double, 61>::integrate(g, lo, hi, 15, opt.tolerance, &err);
    }
    if (!std::isfinite(value) || err > 1e-6 * std::max(1.0, std::fabs(value)))
        throw QuadratureError("connecting-curve quadrature did not converge");
    return value;
}

struct DecaySample {
    double rho = 0.0;
    double surrogate = 0.0;
    double norm_rm = 0.0;
    double norm_ric = 0.0;
    double deviation = 0.0;
    Region region = Region::Singular;
    std::string ray;
};

struct RaySpec {
    /// Regular ray: xi_1 fixed, xi_l log-spaced from xi_l_min to xi_l_max.
    double regular_xi1 = -1.0;
    double regular_min = 1.5;
    double regular_max = 1e4;
    /// Singular ray: xi_l fixed, xi_1 log-spaced (in |xi_1|) from singular_min to singular_max below zero.
    double singular_xil = 1.5;
    double singular_min = -0.5;
    double singular_max = -1e4;
    double alpha_exp = 0.5;
    double c = 1.0;
};

inline std::vector<double> log_spaced(double a, double b, int count) {
    std::vector<double> out;
    if (count == 1) return {a};
    double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < count; ++i) out.push_back(std::exp(la + (lb - la) * i / (count - 1)));
    return out;
}

/// Samples of |Rm|, |Ric| and |g - g'|_g along one Regular and one Singular ray
/// (l = 2), samples_per_ray points each, base point at the chart center.
inline std::vector<DecaySample> curvature_decay_scan(const ChartModel& model, const RaySpec& spec, int samples_per_ray) {
    if (model.l() != 2) throw std::invalid_argument("decay scan is implemented for l = 2");
    std::vector<DecaySample> out;
    auto sample = [&](std::vector<double> xi, const char* ray) {
        ChartPoint p = model.at_xi(std::move(xi));
        auto rep = model.curvature(p, Which::G);
        auto dev = model.g_gprime_deviation(p);
        DecaySample s;
        auto rs = model.rho_surrogate(p);
        s.rho = rs.first;
        s.surrogate = rs.second;
        s.norm_rm = rep.norm_rm;
        s.norm_ric = rep.norm_ric;
        s.deviation = static_cast<double>(dev.norm);
        s.region = region_classify(p, spec.alpha_exp, spec.c).tag;
        s.ray = ray;
        out.push_back(s);
    };
    for (double x2 : log_spaced(spec.regular_min, spec.regular_max, samples_per_ray)) sample({spec.regular_xi1, x2}, "regular");
    for (double m : log_spaced(-spec.singular_min, -spec.singular_max, samples_per_ray)) sample({-m, spec.singular_xil}, "singular");
    std::stable_sort(out.begin(), out.end(), [](const DecaySample& a, const DecaySample& b) { return a.rho < b.rho; });
    return out;
}

/// max over samples of |Rm| (1 + rho).
inline double decay_bound(const std::vector<DecaySample>& samples) {
    double m = 0.0;
    for (const auto& s : samples) {
        double v = s.norm_rm * (1.0 + s.rho);
        if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
        m = std::max(m, v);
    }
    return m;
}

struct VolumeSample {
    double R = 0.0;
    double volume = 0.0;
    double err = 0.0;
};

struct VolumeFit {
    std::vector<VolumeSample> samples;
    double slope = 0.0;
    double intercept = 0.0;
};

/// Vol{xi_l - xi_1 <= R} for l = 2: the torus and projective factors are
/// integrated exactly, the (xi_1, xi_2) triangle by nested Gauss-Legendre with
/// a boundary collar excised; err bounds the excised part.
inline VolumeSample volume_within(const ChartModel& model, double R, Which which, double collar = 1e-3) {
    if (model.l() != 2) throw std::invalid_argument("volume growth is implemented for l = 2");
    double a1 = static_cast<double>(model.alpha()[0]);
    double a2 = static_cast<double>(model.alpha()[1]);
    double span = R - (a2 - a1);
    if (span <= 2.0 * collar) return {R, 0.0, 0.0};
    using boost::math::quadrature::gauss;
    // u = a1 - xi_1 in (collar, span - collar), xi_2 in (a2 + collar, xi_1 + R)
    double sup = 0.0;
    auto inner = [&](double u) {
        double x1 = a1 - u;
        double top = x1 + R;
        double lo = a2 + collar;
        if (top <= lo) return 0.0;
        auto f = [&](double x2) {
            double v = model.reduced_volume_density({x1, x2}, which);
            sup = std::max(sup, v);
            return v;
        };
        return gauss<double, 30>::integrate(f, lo, top);
    };
    // Split the outer range so the kink-free polynomial pieces integrate accurately.
    double value = 0.0;
    int pieces = 8;
    for (int k = 0; k < pieces; ++k) {
        double a = collar + (span - 2 * collar) * k / pieces;
        double b = collar + (span - 2 * collar) * (k + 1) / pieces;
        value += gauss<double, 30>::integrate(inner, a, b);
    }
    // Collar: two strips of width `collar` along the edges of the triangle.
    double collar_area = 2.0 * collar * span;
    return {R, value, sup * collar_area};
}

/// Least-squares slope of log Vol against log R.
inline VolumeFit volume_growth_fit(const ChartModel& model, const std::vector<double>& radii, Which which = Which::G) {
    VolumeFit fit;
    for (double R : radii) fit.samples.push_back(volume_within(model, R, which));
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& s : fit.samples) {
        if (!(s.volume > 0.0)) continue;
        double x = std::log(s.R), y = std::log(s.volume);
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    if (n < 2) throw std::invalid_argument("volume fit needs at least two positive samples");
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

}  // namespace krsol
