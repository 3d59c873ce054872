#pragma once

#include "fairrl/mdp.hpp"
#include "fairrl/rng.hpp"

#include <vector>

namespace fairrl {

/// Blind Gradient Estimation: greedily picks argmax of instantaneous rate
/// over cumulative allocated rate. The warm-start floor stands in for the
/// undefined t=1 denominator and makes the first pick the max-rate agent.
class BgeScheduler {
  public:
    explicit BgeScheduler(int n_agents, double floor = 1e-6)
        : cumulative_(n_agents, 0.0), floor_(floor) {}

    /// Lowest-index tie-break.
    int select(const Vec& current_rates) const;

    /// Credit the chosen agent's achieved rate.
    void credit(int agent, double rate) { cumulative_[agent] += rate; }

    const Vec& cumulative() const { return cumulative_; }

  private:
    Vec cumulative_;
    double floor_;
};

/// Longest queue first, lowest-index tie-break.
int lqf_select(const std::vector<int>& queue_lengths);

int uniform_select(int n_agents, Rng& rng);

/// Tabular SARSA over the joint finite state, epsilon-greedy, with the
/// running fairness value as its scalar reward.
class SarsaAgent {
  public:
    SarsaAgent(int n_states, int n_actions, double gamma = 0.9, double epsilon = 0.05,
               double learning_rate = 0.01)
        : n_actions_(n_actions), gamma_(gamma), epsilon_(epsilon), lr_(learning_rate),
          q_(static_cast<std::size_t>(n_states) * n_actions, 0.0) {}

    int select(int state, Rng& rng) const;
    void update(int s, int a, double fairness_reward, int s2, int a2);

    double q(int s, int a) const { return q_[static_cast<std::size_t>(s) * n_actions_ + a]; }

  private:
    int n_actions_;
    double gamma_, epsilon_, lr_;
    Vec q_;
};

} // namespace fairrl
