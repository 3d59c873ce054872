#pragma once

#include "fairrl/env_interface.hpp"

#include <deque>
#include <vector>

namespace fairrl {

/// Two-state (good/bad) per-agent wireless channels; one agent scheduled per
/// slot, receiving its current rate. Rewards are the tabulated Mbps rates
/// normalized by the table maximum (2.25) so they lie in [0,1]; raw rates are
/// available through current_rates() for reporting and for the BGE baseline.
class CellularFiniteEnv : public FiniteEnv {
  public:
    static constexpr double kStayProb = 0.8;
    static constexpr double kMaxRate = 2.25;

    explicit CellularFiniteEnv(int n_agents);

    int n_states() const override { return 1 << n_agents_; }
    int n_actions() const override { return n_agents_; }
    int n_agents() const override { return n_agents_; }
    int reset(Rng& rng) override;
    FiniteStep step(int action, Rng& rng) override;

    /// Raw Mbps rate of each agent under its current channel condition.
    Vec current_rates() const;
    /// Channel bits (1 = good) of the current joint state.
    Vec observation_bits() const;

    int state() const { return state_; }
    double rate(int agent, bool good) const {
        return good ? good_rates_[agent] : bad_rates_[agent];
    }

    /// Exact ground-truth model; per-agent channels evolve independently
    /// (stay probability 0.9 after folding the uniform resample).
    TabularMdp to_mdp(double gamma = 0.99) const;

  private:
    int n_agents_;
    int state_ = 0;
    Vec good_rates_;
    Vec bad_rates_;
};

/// PgEnv view over the cellular scheduler; observations are channel bits.
class CellularPgEnv : public PgEnv {
  public:
    explicit CellularPgEnv(int n_agents) : env_(n_agents) {}

    int obs_dim() const override { return env_.n_agents(); }
    int n_actions() const override { return env_.n_agents(); }
    int n_agents() const override { return env_.n_agents(); }
    Vec reset(Rng& rng) override {
        env_.reset(rng);
        return env_.observation_bits();
    }
    PgStep step(int action, Rng& rng) override {
        FiniteStep s = env_.step(action, rng);
        return PgStep{std::move(s.rewards), env_.observation_bits()};
    }
    CellularFiniteEnv& base() { return env_; }

  private:
    CellularFiniteEnv env_;
};

/// AR(1) fading channels X_{k,t+1} = sqrt(1-beta^2) X_{k,t} + beta eps.
/// The scheduled agent earns P_k |X_k|^2 with P_k = k^{-0.2} (1-indexed).
/// Rewards are unnormalized; this environment is policy-gradient only.
class GaussMarkovEnv : public PgEnv {
  public:
    explicit GaussMarkovEnv(int n_agents = 8, double beta = 0.1);

    int obs_dim() const override { return n_agents_; }
    int n_actions() const override { return n_agents_; }
    int n_agents() const override { return n_agents_; }
    Vec reset(Rng& rng) override;
    PgStep step(int action, Rng& rng) override;

    const Vec& channels() const { return x_; }

  private:
    int n_agents_;
    double beta_;
    Vec power_;
    Vec x_;
};

/// Sigmoid quality-of-experience of a served user's waiting time.
double qoe(double wait);

/// K bounded Bernoulli-arrival queues with deterministic unit service; the
/// action picks the queue whose head is served. Serving an empty queue is a
/// legal no-op with zero reward. Arrivals happen after service within a step,
/// so the minimum observable wait is 1.
class MultiQueueEnv : public PgEnv {
  public:
    MultiQueueEnv(Vec arrival_rates, int capacity);

    /// Arrival rates of Table 2 (capacity 100), first `k` queues.
    static MultiQueueEnv high_load(int k = 8);
    /// Arrival rates of Table 3 (capacity 10).
    static MultiQueueEnv low_load(int k = 8);

    int obs_dim() const override { return n_agents_; }
    int n_actions() const override { return n_agents_; }
    int n_agents() const override { return n_agents_; }
    Vec reset(Rng& rng) override;
    PgStep step(int action, Rng& rng) override;

    std::vector<int> queue_lengths() const;
    long total_arrivals(int k) const { return arrivals_[k]; }
    long total_served(int k) const { return served_[k]; }
    long total_dropped(int k) const { return dropped_[k]; }

  private:
    Vec observation() const;

    int n_agents_;
    int capacity_;
    Vec rates_;
    long t_ = 0;
    std::vector<std::deque<long>> queues_; // arrival step of each waiting user
    std::vector<long> arrivals_, served_, dropped_;
};

} // namespace fairrl
