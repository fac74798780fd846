#include "krsol/config.hpp"
#include "krsol/runner.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace krsol;

namespace {
std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("krsol_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}
}  // namespace

TEST(Config, ParsesExample) {
    auto cfg = parse_config(
        "# comment\n"
        "l = 2\n"
        "d = [1]\n"
        "alpha = [0, 1]   # trailing comment\n"
        "a = 1/2\n"
        "task = verify-metric\n"
        "seed = 7\n"
        "radii = [10, 2.5e1]\n"
        "tolerance.curvature = 1e-8\n");
    EXPECT_EQ(cfg.l, 2);
    EXPECT_EQ(cfg.d, std::vector<int>{1});
    ASSERT_EQ(cfg.alpha.size(), 2u);
    EXPECT_EQ(cfg.alpha[1], QuadNumber(1));
    EXPECT_EQ(cfg.a, QuadNumber(make_rational(1, 2)));
    EXPECT_EQ(cfg.task, "verify-metric");
    EXPECT_EQ(cfg.seed, 7u);
    EXPECT_EQ(cfg.radii, (std::vector<double>{10.0, 25.0}));
    EXPECT_EQ(cfg.tolerance.at("curvature"), 1e-8);
    EXPECT_EQ(cfg.tolerance.at("soliton"), 1e-5);
    auto p = cfg.params();
    EXPECT_EQ(p.n(), 3);
}

TEST(Config, QuadraticAlpha) {
    auto cfg = parse_config("d = [1, 1]\nalpha = [0, 1, 3*sqrt(2)/2]\n");
    EXPECT_EQ(cfg.alpha[2], QuadNumber(0, make_rational(3, 2), 2));
    auto cfg2 = parse_config("d = [0]\nalpha = [-1, 1 + sqrt(3)]\n");
    EXPECT_EQ(cfg2.alpha[1], QuadNumber(1, 1, 3));
}

TEST(Config, ErrorsCarryLineAndColumn) {
    try {
        parse_config("l = 2\nd = [1\n");
        FAIL() << "expected a parse error";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
    try {
        parse_config("l = 2\n\nbogus = 1\n");
        FAIL() << "expected an unknown-key error";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_EQ(e.column(), 1u);
    }
    EXPECT_THROW(parse_config("l = 2\nl = 3\n"), ConfigError);
    EXPECT_THROW(parse_config("seed = 3x\n"), ConfigError);
    EXPECT_THROW(parse_config("tolerance.nonsense = 1\n"), ConfigError);
    EXPECT_THROW(parse_config("regular_range = [1]\n"), ConfigError);
}

TEST(Config, ValidationErrorsPointAtTheKey) {
    auto cfg = parse_config("d = [1]\nalpha = [1, 0]\n");
    try {
        cfg.params();
        FAIL() << "expected a validation error";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    auto mismatch = parse_config("l = 3\nd = [1]\nalpha = [0, 1]\n");
    try {
        mismatch.params();
        FAIL() << "expected a mismatch error";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line(), 1u);
    }
}

TEST(Config, ToleranceOverride) {
    RunConfig cfg;
    apply_tolerance(cfg, "curvature=1e-9");
    EXPECT_EQ(cfg.tolerance.at("curvature"), 1e-9);
    EXPECT_THROW(apply_tolerance(cfg, "curvature"), std::invalid_argument);
    EXPECT_THROW(apply_tolerance(cfg, "nope=1"), std::invalid_argument);
    EXPECT_THROW(apply_tolerance(cfg, "curvature=1e-9x"), std::invalid_argument);
}

TEST(Runner, SameSeedGivesIdenticalFiles) {
    std::string text = "d = [0]\nalpha = [0, 1]\ntask = verify-metric\nsamples = 5\nseed = 9\n";
    auto a = parse_config(text), b = parse_config(text);
    a.out = scratch("det_a").string();
    b.out = scratch("det_b").string();
    EXPECT_TRUE(Runner(a).run().passed());
    EXPECT_TRUE(Runner(b).run().passed());
    std::string ca = slurp(std::filesystem::path(a.out) / "verify_metric.csv");
    EXPECT_FALSE(ca.empty());
    EXPECT_EQ(ca, slurp(std::filesystem::path(b.out) / "verify_metric.csv"));
}

TEST(Runner, ImpossibleToleranceFails) {
    auto cfg = parse_config("d = [0]\nalpha = [0, 1]\ntask = verify-metric\nsamples = 3\n");
    cfg.out = scratch("strict").string();
    apply_tolerance(cfg, "curvature=1e-300");
    auto rep = Runner(cfg).run();
    EXPECT_FALSE(rep.passed());
    ASSERT_NE(rep.first_failure(), nullptr);
}

TEST(Runner, InvariantsReport) {
    auto cfg = parse_config("d = [1]\nalpha = [0, 1]\ntask = invariants\n");
    cfg.out = scratch("inv").string();
    auto rep = Runner(cfg).run();
    EXPECT_TRUE(rep.passed());
    EXPECT_NE(rep.text().find("cone = (C^2/Z_2) x R; dim = 5"), std::string::npos);
    EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(cfg.out) / "invariants_report.txt"));
}

TEST(Runner, UnknownTask) {
    auto cfg = parse_config("d = [1]\nalpha = [0, 1]\ntask = dance\n");
    cfg.out = scratch("unknown").string();
    EXPECT_THROW(Runner(cfg).run(), std::invalid_argument);
}
