#pragma once

#include "fairrl/mdp.hpp"
#include "fairrl/rng.hpp"

namespace fairrl {

struct FiniteStep {
    Vec rewards;    // one entry per agent
    int next_state = 0;
};

/// Finite state/action environment driven by an external RNG stream.
/// Implementations own their mutable state; instances are independent.
class FiniteEnv {
  public:
    virtual ~FiniteEnv() = default;
    virtual int n_states() const = 0;
    virtual int n_actions() const = 0;
    virtual int n_agents() const = 0;
    virtual int reset(Rng& rng) = 0;
    virtual FiniteStep step(int action, Rng& rng) = 0;
};

struct PgStep {
    Vec rewards;
    Vec observation;
};

/// Real-vector observation environment for the policy-gradient path.
class PgEnv {
  public:
    virtual ~PgEnv() = default;
    virtual int obs_dim() const = 0;
    virtual int n_actions() const = 0;
    virtual int n_agents() const = 0;
    virtual Vec reset(Rng& rng) = 0;
    virtual PgStep step(int action, Rng& rng) = 0;
};

/// Simulates a TabularMdp as a FiniteEnv (used for bandit-style instances
/// and for replaying learned policies on known models).
class TabularMdpEnv : public FiniteEnv {
  public:
    explicit TabularMdpEnv(TabularMdp mdp) : mdp_(std::move(mdp)) {}

    int n_states() const override { return mdp_.n_states(); }
    int n_actions() const override { return mdp_.n_actions(); }
    int n_agents() const override { return mdp_.n_agents(); }

    int reset(Rng& rng) override {
        state_ = rng.categorical(mdp_.initial_dist());
        return state_;
    }

    FiniteStep step(int action, Rng& rng) override {
        if (action < 0 || action >= mdp_.n_actions())
            throw InvalidAction("TabularMdpEnv: action out of range");
        FiniteStep out;
        out.rewards.resize(mdp_.n_agents());
        for (int k = 0; k < mdp_.n_agents(); ++k)
            out.rewards[k] = mdp_.reward(k, state_, action);
        Vec row(mdp_.n_states());
        for (int s2 = 0; s2 < mdp_.n_states(); ++s2) row[s2] = mdp_.p(state_, action, s2);
        state_ = rng.categorical(row);
        out.next_state = state_;
        return out;
    }

    const TabularMdp& mdp() const { return mdp_; }

  private:
    TabularMdp mdp_;
    int state_ = 0;
};

} // namespace fairrl
