#include "krsol/chartscan.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace krsol;

namespace {
SolitonParams l2(int n) { return make_params({n - 2}, {QuadNumber(0), QuadNumber(1)}, QuadNumber(0)); }

/// Composite trapezoid rule of the curve integrand.
double trapezoid(const ChartModel& m, const std::vector<double>& xi, double lo, double hi, int steps) {
    double h = (hi - lo) / steps, s = 0.0;
    for (int k = 0; k <= steps; ++k) {
        double w = (k == 0 || k == steps) ? 0.5 : 1.0;
        s += w * static_cast<double>(curve_integrand(m, xi, lo + k * h));
    }
    return s * h;
}
}  // namespace

TEST(ChartScan, RegionExamples) {
    EXPECT_EQ(region_classify({-100.0, 2.0}, 0.5, 1.0).tag, Region::Singular);
    EXPECT_EQ(region_classify({-1.0, 100.0}, 0.5, 1.0).tag, Region::Regular);
    // xi_l = c rho^alpha exactly: 2 = sqrt(4)
    EXPECT_EQ(region_classify({-2.0, 2.0}, 0.5, 1.0).tag, Region::Singular);
    EXPECT_THROW(region_classify({-2.0, 2.0}, 1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(region_classify({-2.0, 2.0}, 0.5, 0.0), std::invalid_argument);
}

TEST(ChartScan, CurveUpperEndIsARoot) {
    std::vector<double> xi{-100.0, 1.5};
    double s = curve_upper_end(xi, 0.5, 1.0);
    EXPECT_NEAR(s, 1.5 * std::sqrt(s + 100.0), 1e-10 * s);
    EXPECT_EQ(region_classify({-100.0, s}, 0.5, 1.0).tag, Region::Regular);
}

TEST(ChartScan, CurveLengthAgainstTrapezoid) {
    ChartModel m(l2(3));
    ChartPoint p = m.at_xi({-100.0, 1.5});
    double len = connecting_curve_length(m, p, CurveTarget::Regular);
    double hi = curve_upper_end(p.xi, 0.5, 1.0);
    double oracle = trapezoid(m, p.xi, 1.5, hi, 200000);
    EXPECT_NEAR(len, oracle, 1e-6 * oracle);
}

TEST(ChartScan, CurveLengthToBoundaryAgainstMidpointInSubstitutedVariable) {
    ChartModel m(l2(3));
    ChartPoint p = m.at_xi({-10.0, 3.0});
    double len = connecting_curve_length(m, p, CurveTarget::XiLEqualsAlphaL);
    // t = 1 + u^2, dt = 2u du
    int steps = 200000;
    double umax = std::sqrt(2.0), h = umax / steps, s = 0.0;
    for (int k = 0; k < steps; ++k) {
        double u = (k + 0.5) * h;
        s += 2.0 * u * static_cast<double>(curve_integrand(m, p.xi, 1.0L + static_cast<long double>(u) * u));
    }
    EXPECT_NEAR(len, s * h, 1e-6 * len);
}

TEST(ChartScan, CurveMustStartSingular) {
    ChartModel m(l2(3));
    EXPECT_THROW(connecting_curve_length(m, m.at_xi({-1.0, 100.0}), CurveTarget::Regular), std::invalid_argument);
}

TEST(ChartScan, DecayScanShape) {
    ChartModel m(l2(3));
    auto samples = curvature_decay_scan(m, RaySpec{}, 10);
    ASSERT_EQ(samples.size(), 20u);
    for (std::size_t i = 1; i < samples.size(); ++i) EXPECT_LE(samples[i - 1].rho, samples[i].rho);
    EXPECT_TRUE(std::isfinite(decay_bound(samples)));
    for (const auto& s : samples) {
        EXPECT_LT(s.norm_ric, 1e-6 * (1.0 + s.norm_rm));
        EXPECT_GE(s.surrogate, 0.0);
    }
}

TEST(ChartScan, LogSpaced) {
    auto v = log_spaced(1.0, 100.0, 3);
    ASSERT_EQ(v.size(), 3u);
    EXPECT_NEAR(v[1], 10.0, 1e-12);
    EXPECT_EQ(log_spaced(5.0, 7.0, 1), std::vector<double>{5.0});
}

TEST(ChartScan, VolumeGrowthSlopes) {
    std::vector<double> radii{50.0, 100.0, 200.0, 400.0};
    for (int n : {2, 3}) {
        ChartModel m(l2(n));
        auto fit = volume_growth_fit(m, radii, Which::G);
        EXPECT_NEAR(fit.slope, 2.0 * n - 1.0, 0.2) << "n = " << n;
        auto flat = volume_growth_fit(m, radii, Which::GPrime);
        EXPECT_NEAR(flat.slope, 2.0 * n - 1.0, 0.1) << "n = " << n;
        for (const auto& s : fit.samples) EXPECT_LT(s.err, 1e-2 * s.volume);
    }
}

TEST(ChartScan, VolumeMonotoneInRadius) {
    ChartModel m(l2(2));
    double prev = 0.0;
    for (double R : {5.0, 10.0, 20.0}) {
        double v = volume_within(m, R, Which::G).volume;
        EXPECT_GT(v, prev);
        prev = v;
    }
    EXPECT_EQ(volume_within(m, 1.0, Which::G).volume, 0.0);
}
