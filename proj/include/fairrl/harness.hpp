#pragma once

#include "fairrl/envs.hpp"
#include "fairrl/objectives.hpp"
#include "fairrl/occupancy_solver.hpp"
#include "fairrl/policy_gradient.hpp"
#include "fairrl/posterior.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace fairrl {

struct EnvironmentConfig {
    std::string kind;               // cellular | gauss_markov | queue | mdp
    int n_agents = 2;
    double beta = 0.1;              // gauss_markov correlation
    std::string load = "high";      // queue arrival table: high | low
    std::optional<Vec> arrival_rates;
    std::optional<int> capacity;
    std::string mdp_json;           // inline model for kind == "mdp"
    double gamma = 0.99;
};

struct AlgorithmConfig {
    std::string name; // model_based | ops | policy_gradient | bge | lqf | uniform | sarsa
    long train_steps = 5000;
    EpochSchedule schedule = EpochSchedule::fixed(100);
    SolverConfig solver;
    double ops_delta = 0.05;
    std::optional<OpsConfig> ops_override;
    PgConfig pg;
    // SARSA hyperparameters
    double sarsa_gamma = 0.9;
    double sarsa_epsilon = 0.05;
    double sarsa_lr = 0.01;
};

struct ExperimentConfig {
    EnvironmentConfig environment;
    std::string objective_json; // block passed to ObjectiveFunction::from_json
    AlgorithmConfig algorithm;
    long horizon = 1000;
    std::vector<std::uint64_t> seeds;
    std::string output_dir = "out";
    bool regret = false;
    int record_every = 1;
    int max_workers = 0; // 0 = hardware concurrency

    static ExperimentConfig from_json(const std::string& text);
    static ExperimentConfig from_file(const std::string& path);
    std::string to_json() const; // echo for the summary
};

struct RegretRecord {
    long t = 0;
    double optimal_value = 0.0;
    double achieved = 0.0;
    double regret = 0.0;
};

/// f applied to the per-agent running means over the first t rows.
double running_fairness(const ObjectiveFunction& f,
                        const std::vector<Vec>& reward_history, long t);

RegretRecord compute_regret(const ObjectiveFunction& f, const Vec& optimal_lambda,
                            const std::vector<Vec>& reward_history, long t);

/// Linear-interpolation percentile of an unsorted sample, p in [0,1].
double percentile(Vec values, double p);

struct SeedOutcome {
    std::uint64_t seed = 0;
    Vec fairness_curve;                 // f_t for t = 1..horizon
    std::vector<double> regret_curve;   // empty when regret reporting is off
    std::vector<Vec> reward_history;    // reporting units
};

/// Run one seed of the configured algorithm on a fresh environment.
SeedOutcome run_seed(const ExperimentConfig& cfg, std::uint64_t seed);

/// Ground-truth occupancy optimum for finite environments; nullopt otherwise.
/// The lambda vector is in reporting units (raw Mbps for cellular).
std::optional<SolveResult> solve_oracle(const ExperimentConfig& cfg);

/// Full pipeline: all seeds (worker pool), per-seed CSVs, aggregate
/// median/quartile CSV, and a JSON summary in cfg.output_dir.
void run_experiment(const ExperimentConfig& cfg);

} // namespace fairrl
