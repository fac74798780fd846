#pragma once

// Task dispatch for the command-line front end: each task evaluates a suite,
// records assertions against tolerances, and writes a report plus CSV files.

#include "krsol/chartmetric.hpp"
#include "krsol/chartscan.hpp"
#include "krsol/coneinv.hpp"
#include "krsol/config.hpp"
#include "krsol/identities.hpp"
#include "krsol/potential.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace krsol {

inline const std::vector<std::string>& task_names() {
    static const std::vector<std::string> names{"invariants", "verify-identities", "verify-metric",
                                                "decay-scan", "volume-fit",        "deviation-scan"};
    return names;
}

/// %.17g
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Assertion {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct TaskReport {
    std::string task;
    std::vector<std::string> lines;
    std::vector<Assertion> assertions;
    std::vector<std::string> files;

    /// Records value <= tolerance (NaN fails).
    bool check(const std::string& name, double value, double tolerance) {
        bool ok = value <= tolerance;
        assertions.push_back({name, value, tolerance, ok});
        return ok;
    }
    bool passed() const {
        for (const auto& a : assertions)
            if (!a.passed) return false;
        return true;
    }
    const Assertion* first_failure() const {
        for (const auto& a : assertions)
            if (!a.passed) return &a;
        return nullptr;
    }
    std::string text() const {
        std::ostringstream os;
        os << "task: " << task << "\n";
        for (const auto& l : lines) os << l << "\n";
        for (const auto& a : assertions)
            os << (a.passed ? "PASS " : "FAIL ") << a.name << ": " << fmt17(a.value) << " <= " << fmt17(a.tolerance) << "\n";
        for (const auto& f : files) os << "wrote " << f << "\n";
        os << (passed() ? "all assertions passed" : "assertion failed") << "\n";
        return os.str();
    }
};

class Runner {
public:
    explicit Runner(RunConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) {}

    TaskReport run() {
        report_ = TaskReport{};
        report_.task = cfg_.task;
        static const std::map<std::string, void (Runner::*)()> dispatch{
            {"invariants", &Runner::invariants},     {"verify-identities", &Runner::verify_identities},
            {"verify-metric", &Runner::verify_metric}, {"decay-scan", &Runner::decay_scan},
            {"volume-fit", &Runner::volume_fit},     {"deviation-scan", &Runner::deviation_scan}};
        auto it = dispatch.find(cfg_.task);
        if (it == dispatch.end()) throw std::invalid_argument("unknown task '" + cfg_.task + "'");
        params_ = cfg_.params();
        report_.lines.push_back("params: " + describe(params_));
        (this->*(it->second))();
        write_file(cfg_.task + "_report.txt", report_.text());
        return report_;
    }

private:
    double tol(const std::string& k) const { return cfg_.tolerance.at(k); }

    void write_file(const std::string& name, const std::string& content) {
        std::filesystem::create_directories(cfg_.out);
        auto path = std::filesystem::path(cfg_.out) / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + path.string());
        f << content;
        if (name.size() < 11 || name.substr(name.size() - 11) != "_report.txt") report_.files.push_back(path.string());
    }

    void invariants() {
        auto ci = cone_descriptor(params_);
        report_.lines.push_back(ci.summary());
        std::string e1 = "e1 = ";
        for (std::size_t j = 0; j < ci.e1_coeffs.size(); ++j) e1 += (j ? " + (" : "(") + ci.e1_coeffs[j].str() + ") v_" + std::to_string(j + 1);
        report_.lines.push_back(e1);
        report_.lines.push_back("certificate: " + ci.certificate);
        // sum_j c_j v_j = e_1, exactly
        auto v = lattice_vectors(params_);
        double mismatch = 0.0;
        for (std::size_t r = 0; r < v.size(); ++r) {
            QuadNumber s(0);
            for (std::size_t j = 0; j < v.size(); ++j) s = s + ci.e1_coeffs[j] * v[j][r];
            if (!(s == QuadNumber(r == 0 ? 1 : 0))) mismatch += 1.0;
        }
        report_.check("e1 expansion reproduces e_1", mismatch, tol("exact"));
    }

    void verify_identities() {
        for (const auto& t : vandermonde_suite(rng_, cfg_.instances)) tally(t);
        for (const auto& t : flatmodel_suite(rng_, cfg_.instances)) tally(t);
    }

    void tally(const IdentityTally& t) {
        report_.lines.push_back(t.name + ": " + std::to_string(t.checked) + " checks, " + std::to_string(t.failed) +
                                " failures" + (t.failed ? " (first at " + t.first_failure + ")" : ""));
        report_.check(t.name + " failures", static_cast<double>(t.failed), tol("exact"));
    }

    bool is_potential_case() const {
        return params_.l() == 2 && params_.a.sign() == 0 && params_.alpha[0] == QuadNumber(0) &&
               params_.alpha[1] == QuadNumber(1);
    }

    void verify_metric() {
        ChartModel model(params_);
        bool flat_a = params_.a.sign() == 0;
        std::ostringstream csv;
        csv << "point,j_squared,compatibility,kahler_form,d_omega,moment_map,norm_rm,norm_ric,norm_rm_prime,soliton,ddc\n";
        double worst_kahler = 0, worst_flat = 0, worst_ric = 0, worst_ddc = 0;
        PotentialSpec pot{cfg_.potential_C, params_.n()};
        for (int i = 0; i < cfg_.samples; ++i) {
            ChartPoint p = model.random_point(rng_);
            auto k = model.kahler_structure_check(p);
            auto c = model.curvature(p, Which::G);
            auto cp = model.curvature(p, Which::GPrime);
            double sol = flat_a ? c.norm_ric / (1.0 + c.norm_rm) : model.soliton_residual(p);
            double ddc = is_potential_case() ? ddc_check(model, p, pot).residual : 0.0;
            worst_kahler = std::max(worst_kahler, k.max());
            worst_flat = std::max(worst_flat, cp.norm_rm);
            worst_ric = std::max(worst_ric, sol);
            worst_ddc = std::max(worst_ddc, ddc);
            csv << i << ',' << fmt17(k.j_squared) << ',' << fmt17(k.compatibility) << ',' << fmt17(k.kahler_form) << ','
                << fmt17(k.d_omega) << ',' << fmt17(k.moment_map) << ',' << fmt17(c.norm_rm) << ',' << fmt17(c.norm_ric)
                << ',' << fmt17(cp.norm_rm) << ',' << fmt17(sol) << ',' << fmt17(ddc) << '\n';
        }
        write_file("verify_metric.csv", csv.str());
        report_.check("Kahler structure residual", worst_kahler, tol("curvature"));
        report_.check("|Rm(g')|", worst_flat, tol("curvature"));
        if (flat_a) {
            report_.check("|Ric(g)|/(1+|Rm(g)|)", worst_ric, tol("curvature"));
        } else {
            report_.lines.push_back("soliton sign convention: " + std::to_string(ChartModel::soliton_sign()));
            report_.check("soliton residual", worst_ric, tol("soliton"));
        }
        if (is_potential_case()) {
            report_.lines.push_back("dd^c factor: " + fmt17(ddc_factor(pot)));
            report_.check("dd^c H - omega", worst_ddc, tol("curvature"));
        }
        // Finite-difference cross-check of the AD curvature at the chart center.
        ChartPoint p0 = model.random_point(rng_);
        auto ad = model.curvature(p0, Which::G);
        auto fdj = metric_jet_fd([&](const std::vector<double>& x) { return model.metric(x, Which::G); }, model.coords(p0));
        auto fd = compute_curvature(fdj);
        report_.check("AD vs finite-difference |Rm|", std::fabs(ad.norm_rm - fd.norm_rm) / (1.0 + ad.norm_rm), tol("fd"));
    }

    RaySpec ray_spec() const {
        RaySpec s;
        s.regular_xi1 = cfg_.regular_xi1;
        s.regular_min = cfg_.regular_range[0];
        s.regular_max = cfg_.regular_range[1];
        s.singular_xil = cfg_.singular_xil;
        s.singular_min = cfg_.singular_range[0];
        s.singular_max = cfg_.singular_range[1];
        s.alpha_exp = cfg_.curve_alpha.empty() ? 0.5 : cfg_.curve_alpha[cfg_.curve_alpha.size() / 2];
        s.c = cfg_.region_c;
        return s;
    }

    void decay_scan() {
        ChartModel model(params_);
        auto samples = curvature_decay_scan(model, ray_spec(), cfg_.samples);
        std::ostringstream csv;
        csv << "rho,surrogate,norm_rm,norm_ric,deviation,region\n";
        double back_steps = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const auto& s = samples[i];
            csv << fmt17(s.rho) << ',' << fmt17(s.surrogate) << ',' << fmt17(s.norm_rm) << ',' << fmt17(s.norm_ric) << ','
                << fmt17(s.deviation) << ',' << to_string(s.region) << '\n';
            if (i > 0 && s.rho < samples[i - 1].rho) back_steps += 1.0;
        }
        write_file("decay_scan.csv", csv.str());
        double bound = decay_bound(samples);
        report_.lines.push_back("max |Rm| (1 + rho) = " + fmt17(bound));
        report_.check("rho column decreases", back_steps, tol("exact"));
        report_.check("max |Rm| (1 + rho) is finite", std::isfinite(bound) ? 0.0 : INFINITY, tol("exact"));
    }

    void volume_fit() {
        ChartModel model(params_);
        auto fit = volume_growth_fit(model, cfg_.radii, Which::G);
        std::ostringstream csv;
        csv << "R,volume,err\n";
        for (const auto& s : fit.samples) csv << fmt17(s.R) << ',' << fmt17(s.volume) << ',' << fmt17(s.err) << '\n';
        write_file("volume_fit.csv", csv.str());
        double expected = 2.0 * params_.n() - 1.0;
        report_.lines.push_back("slope = " + fmt17(fit.slope) + " (expected " + fmt17(expected) + ")");
        report_.check("|slope - (2n - 1)|", std::fabs(fit.slope - expected), tol("slope"));
    }

    void deviation_scan() {
        ChartModel model(params_);
        std::ostringstream csv;
        csv << "xi_l,deviation,closed_form,scaled\n";
        double worst = 0.0, lo = INFINITY, hi = 0.0;
        int n = params_.n();
        for (double x : log_spaced(std::max(cfg_.regular_range[0], 10.0), cfg_.regular_range[1], cfg_.samples)) {
            auto rep = model.g_gprime_deviation(model.at_xi({cfg_.regular_xi1, x}));
            double dev = static_cast<double>(rep.norm);
            double cf = static_cast<double>(rep.closed_form);
            double scaled = dev * std::pow(x, n - 1);
            worst = std::max(worst, static_cast<double>(std::fabs(rep.norm - rep.closed_form) / rep.closed_form));
            lo = std::min(lo, scaled);
            hi = std::max(hi, scaled);
            csv << fmt17(x) << ',' << fmt17(dev) << ',' << fmt17(cf) << ',' << fmt17(scaled) << '\n';
        }
        write_file("deviation_scan.csv", csv.str());
        report_.check("relative |g - g'| vs closed form", worst, tol("deviation"));
        if (params_.a.sign() == 0) {
            report_.lines.push_back("deviation * xi_l^(n-1) in [" + fmt17(lo) + ", " + fmt17(hi) + "]");
            report_.check("band ratio of deviation * xi_l^(n-1)", hi / lo, tol("band"));
        }
    }

    RunConfig cfg_;
    std::mt19937_64 rng_;
    SolitonParams params_;
    TaskReport report_;
};

}  // namespace krsol
