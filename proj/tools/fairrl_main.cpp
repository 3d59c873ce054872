#include "fairrl/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace {

int cmd_run(const std::string& config_path) {
    fairrl::ExperimentConfig cfg = fairrl::ExperimentConfig::from_file(config_path);
    fairrl::run_experiment(cfg);
    std::cout << "wrote results to " << cfg.output_dir << "\n";
    return 0;
}

int cmd_validate(const std::string& config_path) {
    fairrl::ExperimentConfig::from_file(config_path);
    std::cout << "config ok\n";
    return 0;
}

int cmd_oracle(const std::string& config_path) {
    fairrl::ExperimentConfig cfg = fairrl::ExperimentConfig::from_file(config_path);
    auto solved = fairrl::solve_oracle(cfg);
    if (!solved) {
        std::cerr << "oracle: no tractable ground-truth model for environment kind '"
                  << cfg.environment.kind << "'\n";
        return 1;
    }
    std::cout << "lambda*:";
    for (double l : solved->avg_rewards) std::cout << ' ' << l;
    std::cout << "\nf*: " << solved->objective << "\n";
    if (!solved->converged)
        std::cout << "warning: solver hit its iteration cap while still improving\n";
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& field,
              const std::vector<long>& values) {
    namespace fs = std::filesystem;
    fairrl::ExperimentConfig base = fairrl::ExperimentConfig::from_file(config_path);
    for (long value : values) {
        fairrl::ExperimentConfig cfg = base;
        if (field == "K") {
            cfg.environment.n_agents = static_cast<int>(value);
        } else if (field == "T") {
            cfg.horizon = value;
        } else {
            throw fairrl::ConfigError("sweep: field must be K or T");
        }
        cfg.output_dir =
            (fs::path(base.output_dir) / (field + "_" + std::to_string(value))).string();
        fairrl::run_experiment(cfg);
        std::cout << "wrote results to " << cfg.output_dir << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fairness-aware multi-agent RL experiment harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string sweep_field = "K";
    std::vector<long> sweep_values;

    CLI::App* run = app.add_subcommand("run", "Run an experiment config");
    run->add_option("config", config_path, "Path to a JSON experiment config")->required();

    CLI::App* validate = app.add_subcommand("validate", "Check a config without running");
    validate->add_option("config", config_path)->required();

    CLI::App* oracle =
        app.add_subcommand("oracle", "Solve the ground-truth occupancy program");
    oracle->add_option("config", config_path)->required();

    CLI::App* sweep = app.add_subcommand("sweep", "Run a config over a list of K or T");
    sweep->add_option("config", config_path)->required();
    sweep->add_option("--field", sweep_field, "K or T")->required();
    sweep->add_option("--values", sweep_values)->required()->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path);
        if (validate->parsed()) return cmd_validate(config_path);
        if (oracle->parsed()) return cmd_oracle(config_path);
        if (sweep->parsed()) return cmd_sweep(config_path, sweep_field, sweep_values);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
