#pragma once

#include "fairrl/errors.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fairrl {

using Vec = std::vector<double>;

/// Finite multi-agent MDP: one transition kernel shared by all agents,
/// K reward tables in [0,1].
class TabularMdp {
  public:
    TabularMdp(int n_states, int n_actions, int n_agents, double discount,
               Vec transition, std::vector<Vec> rewards, Vec initial_dist,
               std::optional<double> diameter = std::nullopt);

    int n_states() const { return n_states_; }
    int n_actions() const { return n_actions_; }
    int n_agents() const { return n_agents_; }
    double discount() const { return discount_; }
    std::optional<double> diameter() const { return diameter_; }

    double p(int s, int a, int s2) const {
        return transition_[(static_cast<std::size_t>(s) * n_actions_ + a) * n_states_ + s2];
    }
    double reward(int agent, int s, int a) const {
        return rewards_[agent][static_cast<std::size_t>(s) * n_actions_ + a];
    }
    const Vec& transition() const { return transition_; }
    const std::vector<Vec>& rewards() const { return rewards_; }
    const Vec& initial_dist() const { return initial_dist_; }

    std::string to_json() const;
    static TabularMdp from_json(const std::string& text);

  private:
    int n_states_;
    int n_actions_;
    int n_agents_;
    double discount_;
    Vec transition_;              // (s, a, s') row-major
    std::vector<Vec> rewards_;    // K tables, (s, a) row-major
    Vec initial_dist_;
    std::optional<double> diameter_;
};

/// Stochastic policy pi(a|s), rows sum to one.
class TabularPolicy {
  public:
    TabularPolicy(int n_states, int n_actions, Vec probs);
    static TabularPolicy uniform(int n_states, int n_actions);

    int n_states() const { return n_states_; }
    int n_actions() const { return n_actions_; }
    double prob(int s, int a) const {
        return probs_[static_cast<std::size_t>(s) * n_actions_ + a];
    }
    const Vec& probs() const { return probs_; }

  private:
    int n_states_;
    int n_actions_;
    Vec probs_;
};

/// Stationary joint state-action distribution d(s,a).
struct OccupancyMeasure {
    int n_states = 0;
    int n_actions = 0;
    Vec d; // (s, a) row-major

    double at(int s, int a) const {
        return d[static_cast<std::size_t>(s) * n_actions + a];
    }
    Vec state_marginals() const;
    std::string to_json() const;
};

struct PolicyEvaluation {
    Vec steady_state_dist;     // d(s)
    OccupancyMeasure occupancy; // d(s,a) = d(s) pi(a|s)
    Vec avg_rewards;           // lambda^k = sum_{s,a} r^k(s,a) d(s,a)
};

/// Stationary distribution of the policy-induced chain by power iteration.
/// Throws NonErgodicChain if the L1 residual does not fall below `tolerance`
/// within `max_iters` sweeps.
PolicyEvaluation steady_state(const TabularMdp& mdp, const TabularPolicy& policy,
                              double tolerance = 1e-12, long max_iters = 1000000);

/// True iff a >= b componentwise and a_k > b_k + strict_tol for some k.
bool pareto_dominates(const Vec& a, const Vec& b, double strict_tol = 1e-12);

/// True iff no policy in the grid, evaluated exactly, Pareto-dominates the
/// candidate reward vector.
bool verify_pareto_front(const TabularMdp& mdp, const Vec& candidate,
                         const std::vector<TabularPolicy>& policy_grid);

} // namespace fairrl
