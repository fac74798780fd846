#include "krsol/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"Soliton verification toolkit"};
    std::string config_path, task, out;
    std::uint64_t seed = 0;
    std::vector<std::string> tolerances;
    app.add_option("--config", config_path, "Run configuration file")->required()->check(CLI::ExistingFile);
    app.add_option("--task", task, "Task name (overrides the config)")->check(CLI::IsMember(krsol::task_names()));
    auto* seed_opt = app.add_option("--seed", seed, "Random seed");
    app.add_option("--out", out, "Output directory");
    app.add_option("--tolerance", tolerances, "Tolerance override K=V (repeatable)")->take_all();
    CLI11_PARSE(app, argc, argv);

    krsol::RunConfig cfg;
    try {
        std::ifstream f(config_path, std::ios::binary);
        std::stringstream buf;
        buf << f.rdbuf();
        cfg = krsol::parse_config(buf.str());
        if (!task.empty()) cfg.task = task;
        if (*seed_opt) cfg.seed = seed;
        if (!out.empty()) cfg.out = out;
        for (const auto& kv : tolerances) krsol::apply_tolerance(cfg, kv);
        if (cfg.task.empty()) throw std::invalid_argument("no task given in the config or on the command line");
    } catch (const std::exception& e) {
        std::cerr << config_path << ": " << e.what() << "\n";
        return 2;
    }

    try {
        krsol::Runner runner(cfg);
        auto report = runner.run();
        std::cout << report.text();
        if (const auto* fail = report.first_failure()) {
            std::cerr << "first failing assertion: " << fail->name << " = " << krsol::fmt17(fail->value)
                      << " exceeds " << krsol::fmt17(fail->tolerance) << "\n";
            return 1;
        }
    } catch (const krsol::ConfigError& e) {
        std::cerr << config_path << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
