#pragma once

#include "fairrl/env_interface.hpp"
#include "fairrl/occupancy_solver.hpp"

#include <cstdint>
#include <iosfwd>

namespace fairrl {

/// Per-(s,a) Dirichlet visit counts over next states plus accumulated
/// per-agent rewards. Counts start at 1 (the prior); `scaled` holds the
/// M table used by the optimistic variant.
class DirichletPosterior {
  public:
    DirichletPosterior(int n_states, int n_actions, int n_agents, double omega = 1.0);

    int n_states() const { return S_; }
    int n_actions() const { return A_; }
    int n_agents() const { return K_; }

    void record(int s, int a, const Vec& rewards, int next_state);

    double count(int s, int a, int s2) const {
        return counts_[(static_cast<std::size_t>(s) * A_ + a) * S_ + s2];
    }
    /// Total Dirichlet mass for a row, prior included.
    double count_total(int s, int a) const;
    /// Observed environment steps at (s,a).
    long visits(int s, int a) const {
        return visits_[static_cast<std::size_t>(s) * A_ + a];
    }
    double scaled_count(int s, int a, int s2) const {
        return scaled_[(static_cast<std::size_t>(s) * A_ + a) * S_ + s2];
    }

    /// r_hat^k(s,a) = accumulated reward / max(visits, 1); 0 when unvisited.
    double reward_estimate(int agent, int s, int a) const;
    /// All reward estimates as K tables (solver input).
    std::vector<Vec> reward_estimates() const;

    /// Refresh M(s,a,s') = (N(s,a,s') + omega) / kappa for every entry.
    void rescale(double omega, double kappa);

    /// One Dirichlet draw for row (s,a) from the stored counts.
    Vec sample_row(int s, int a, Rng& rng) const;
    /// As sample_row but from the scaled M counts.
    Vec sample_row_scaled(int s, int a, Rng& rng) const;

    std::string to_json() const;
    static DirichletPosterior from_json(const std::string& text);

  private:
    int S_, A_, K_;
    Vec counts_;              // N(s,a,s'), prior 1
    Vec scaled_;              // M(s,a,s')
    std::vector<Vec> reward_sums_;
    std::vector<long> visits_;
};

/// Full kernel draw, one independent Dirichlet row per (s,a); every entry
/// strictly positive. Deterministic for a fixed seed.
Vec sample_kernel(const DirichletPosterior& post, std::uint64_t rng_seed);

struct EpochSchedule {
    enum class Kind { Fixed, Doubling };
    Kind kind = Kind::Fixed;
    int tau = 100;

    static EpochSchedule fixed(int tau) { return {Kind::Fixed, tau}; }
    static EpochSchedule doubling() { return {Kind::Doubling, 0}; }
};

/// Optimistic-sampling configuration. Big-O constants are taken as 1;
/// optimism_threshold is the visit-count cutoff below which a row of the
/// extended MDP is shifted optimistically.
struct OpsConfig {
    double delta = 0.05;
    long horizon = 10000;
    int psi = 1;
    double omega = 1.0;
    double kappa = 1.0;
    double optimism_threshold = 0.0;

    static OpsConfig standard(double delta, long horizon, int n_states, int n_actions);
};

/// Action (a, j) of the extended MDP transitions by the j-th sampled kernel
/// for (s, a). Extended action index = a * psi + j.
struct ExtendedMdp {
    int n_states = 0;
    int n_base_actions = 0;
    int psi = 1;
    Vec kernels; // (s, a*psi + j, s') row-major

    int n_actions() const { return n_base_actions * psi; }
    double q(int s, int ext_action, int s2) const {
        return kernels[(static_cast<std::size_t>(s) * n_base_actions * psi + ext_action) *
                           n_states + s2];
    }
};

ExtendedMdp build_extended_mdp(const DirichletPosterior& post, const OpsConfig& cfg,
                               std::uint64_t rng_seed);

struct TrajectoryRow {
    long t = 0;
    int epoch = 0;
    int state = 0;
    int action = 0;
    Vec rewards;
    int next_state = 0;
};

struct TrajectoryLog {
    std::vector<TrajectoryRow> rows;
    void write_csv(std::ostream& os) const;
};

struct LearningResult {
    TabularPolicy policy;
    TrajectoryLog log;
};

/// Posterior-sampling loop: act, update counts, and at each epoch boundary
/// sample one kernel, plan through the occupancy program on the estimated
/// rewards, and extract the next policy. The initial policy is uniform.
LearningResult run_model_based(FiniteEnv& env, const ObjectiveFunction& f,
                               const EpochSchedule& schedule, const SolverConfig& solver,
                               long total_steps, std::uint64_t rng_seed);

/// Optimistic variant: per epoch builds the extended MDP (psi kernel samples
/// per (s,a), optimistic rows below the visit threshold), plans over the
/// extended action set, and executes by sampling an extended action and
/// playing its base action. Epochs end on the visit-count doubling rule.
LearningResult run_ops(FiniteEnv& env, const ObjectiveFunction& f, const OpsConfig& cfg,
                       const SolverConfig& solver, std::uint64_t rng_seed);

} // namespace fairrl
