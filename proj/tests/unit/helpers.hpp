#pragma once

#include "fairrl/env_interface.hpp"
#include "fairrl/mdp.hpp"
#include "fairrl/rng.hpp"

#include <cmath>
#include <vector>

namespace fairrl::testing {

/// 1-state K-agent bandit: action k pays agent k one unit.
inline TabularMdp make_symmetric_bandit(int n_agents) {
    const int A = n_agents;
    Vec trans(A, 1.0);
    std::vector<Vec> rewards(n_agents, Vec(A, 0.0));
    for (int k = 0; k < n_agents; ++k) rewards[k][k] = 1.0;
    return TabularMdp(1, A, n_agents, 0.99, std::move(trans), std::move(rewards), {1.0});
}

/// 1-state single-agent bandit with rewards r=(1,0).
inline TabularMdp make_k1_bandit() {
    return TabularMdp(1, 2, 1, 0.99, {1.0, 1.0}, {{1.0, 0.0}}, {1.0});
}

/// Random MDP with a kernel bounded away from zero (mixes Dirichlet rows
/// with the uniform distribution).
inline TabularMdp random_mdp(int S, int A, int K, Rng& rng, double uniform_mix = 0.3) {
    Vec trans(static_cast<std::size_t>(S) * A * S);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) {
            Vec row = rng.dirichlet(Vec(S, 1.0));
            for (int s2 = 0; s2 < S; ++s2)
                trans[(static_cast<std::size_t>(s) * A + a) * S + s2] =
                    (1.0 - uniform_mix) * row[s2] + uniform_mix / S;
        }
    std::vector<Vec> rewards(K, Vec(static_cast<std::size_t>(S) * A));
    for (int k = 0; k < K; ++k)
        for (double& r : rewards[k]) r = rng.uniform();
    return TabularMdp(S, A, K, 0.99, std::move(trans), std::move(rewards),
                      Vec(S, 1.0 / S));
}

inline TabularPolicy random_policy(int S, int A, Rng& rng) {
    Vec probs(static_cast<std::size_t>(S) * A);
    for (int s = 0; s < S; ++s) {
        Vec row = rng.dirichlet(Vec(A, 1.0));
        for (int a = 0; a < A; ++a) probs[static_cast<std::size_t>(s) * A + a] = row[a];
    }
    return TabularPolicy(S, A, std::move(probs));
}

/// Constant-observation bandit for the policy-gradient path: action k pays
/// agent k one unit; K agents, K actions.
class BanditPgEnv : public PgEnv {
  public:
    explicit BanditPgEnv(int n_agents) : n_agents_(n_agents) {}
    int obs_dim() const override { return 1; }
    int n_actions() const override { return n_agents_; }
    int n_agents() const override { return n_agents_; }
    Vec reset(Rng&) override { return {1.0}; }
    PgStep step(int action, Rng&) override {
        PgStep out;
        out.rewards.assign(n_agents_, 0.0);
        out.rewards[action] = 1.0;
        out.observation = {1.0};
        return out;
    }

  private:
    int n_agents_;
};

/// Single-agent two-action bandit: action 0 pays 1, action 1 pays 0.
class K1BanditPgEnv : public PgEnv {
  public:
    int obs_dim() const override { return 1; }
    int n_actions() const override { return 2; }
    int n_agents() const override { return 1; }
    Vec reset(Rng&) override { return {1.0}; }
    PgStep step(int action, Rng&) override {
        return {{action == 0 ? 1.0 : 0.0}, {1.0}};
    }
};

inline double l1_distance(const Vec& a, const Vec& b) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
    return total;
}

} // namespace fairrl::testing
