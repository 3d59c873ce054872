#include "fairrl/mdp.hpp"

#include "fairrl/env_interface.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace fairrl;
using namespace fairrl::testing;

namespace {

TabularMdp chain_mdp(const std::vector<Vec>& rows) {
    const int S = static_cast<int>(rows.size());
    Vec trans;
    for (const Vec& row : rows) trans.insert(trans.end(), row.begin(), row.end());
    std::vector<Vec> rewards{Vec(S, 0.5)};
    Vec rho(S, 1.0 / S);
    return TabularMdp(S, 1, 1, 0.99, std::move(trans), std::move(rewards), std::move(rho));
}

} // namespace

TEST_CASE("steady state of the two-state reference chain is (5/6, 1/6)") {
    TabularMdp mdp = chain_mdp({{0.9, 0.1}, {0.5, 0.5}});
    PolicyEvaluation eval = steady_state(mdp, TabularPolicy::uniform(2, 1));
    CHECK(eval.steady_state_dist[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-10));
    CHECK(eval.steady_state_dist[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
}

TEST_CASE("single-state MDP has trivial steady state") {
    TabularMdp mdp = make_k1_bandit();
    PolicyEvaluation eval = steady_state(mdp, TabularPolicy::uniform(1, 2));
    CHECK(eval.steady_state_dist[0] == doctest::Approx(1.0));
    CHECK(eval.avg_rewards[0] == doctest::Approx(0.5));
}

TEST_CASE("doubly stochastic chain has the uniform steady state") {
    TabularMdp mdp = chain_mdp({{0.2, 0.3, 0.5}, {0.5, 0.2, 0.3}, {0.3, 0.5, 0.2}});
    PolicyEvaluation eval = steady_state(mdp, TabularPolicy::uniform(3, 1));
    for (int s = 0; s < 3; ++s)
        CHECK(eval.steady_state_dist[s] == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("steady state satisfies stationarity and marginal identities") {
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        TabularMdp mdp = random_mdp(4, 3, 2, rng);
        TabularPolicy pi = random_policy(4, 3, rng);
        PolicyEvaluation eval = steady_state(mdp, pi);

        double total = 0.0;
        for (double v : eval.steady_state_dist) {
            CHECK(v >= 0.0);
            total += v;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));

        // d = d P_pi within 1e-10 in L1.
        Vec next(4, 0.0);
        for (int s = 0; s < 4; ++s)
            for (int a = 0; a < 3; ++a)
                for (int s2 = 0; s2 < 4; ++s2)
                    next[s2] += eval.steady_state_dist[s] * pi.prob(s, a) * mdp.p(s, a, s2);
        CHECK(l1_distance(next, eval.steady_state_dist) < 1e-10);

        // d(s) = sum_a d(s,a).
        Vec marginals = eval.occupancy.state_marginals();
        CHECK(l1_distance(marginals, eval.steady_state_dist) < 1e-12);

        // lambda^k = sum r^k d.
        for (int k = 0; k < 2; ++k) {
            double lambda = 0.0;
            for (int s = 0; s < 4; ++s)
                for (int a = 0; a < 3; ++a)
                    lambda += mdp.reward(k, s, a) * eval.occupancy.at(s, a);
            CHECK(lambda == doctest::Approx(eval.avg_rewards[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("exact average reward matches a long rollout") {
    Rng rng(23);
    TabularMdp mdp = random_mdp(3, 2, 2, rng, 0.5);
    TabularPolicy pi = random_policy(3, 2, rng);
    PolicyEvaluation eval = steady_state(mdp, pi);

    TabularMdpEnv env(mdp);
    Rng sim(101);
    const long T = 1000000;
    int state = env.reset(sim);
    Vec sums(2, 0.0), sums_sq(2, 0.0);
    Vec row(2);
    for (long t = 0; t < T; ++t) {
        for (int a = 0; a < 2; ++a) row[a] = pi.prob(state, a);
        FiniteStep step = env.step(sim.categorical(row), sim);
        for (int k = 0; k < 2; ++k) {
            sums[k] += step.rewards[k];
            sums_sq[k] += step.rewards[k] * step.rewards[k];
        }
        state = step.next_state;
    }
    for (int k = 0; k < 2; ++k) {
        const double mean = sums[k] / T;
        const double sd = std::sqrt(sums_sq[k] / T - mean * mean);
        // The chain mixes fast (kernel bounded well away from zero), so the
        // i.i.d. standard error is close enough for a 3-sigma band.
        const double se = sd / std::sqrt(static_cast<double>(T));
        CHECK(std::abs(mean - eval.avg_rewards[k]) < 3.0 * se + 1e-6);
    }
}

TEST_CASE("non-ergodic chains are reported") {
    // States 0 and 1 form a 2-cycle fed by state 2, so the mass oscillates
    // between them forever and power iteration never settles.
    Vec trans{0.0, 1.0, 0.0,  // 0 -> 1
              1.0, 0.0, 0.0,  // 1 -> 0
              1.0, 0.0, 0.0}; // 2 -> 0
    TabularMdp mdp(3, 1, 1, 0.99, std::move(trans), {{1.0, 0.0, 0.0}},
                   {1.0, 0.0, 0.0});
    CHECK_THROWS_AS(steady_state(mdp, TabularPolicy::uniform(3, 1), 1e-12, 1000),
                    NonErgodicChain);
}

TEST_CASE("pareto dominance definition") {
    CHECK(pareto_dominates({1, 2}, {1, 1}));
    CHECK_FALSE(pareto_dominates({1, 1}, {1, 1}));
    CHECK_FALSE(pareto_dominates({2, 0}, {1, 1}));
    CHECK_THROWS_AS(pareto_dominates({1.0}, {1.0, 2.0}), DimensionMismatch);
}

TEST_CASE("pareto dominance is irreflexive and antisymmetric") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        Vec a(3), b(3);
        for (int k = 0; k < 3; ++k) {
            a[k] = rng.uniform();
            b[k] = rng.uniform();
        }
        CHECK_FALSE(pareto_dominates(a, a));
        const bool both = pareto_dominates(a, b) && pareto_dominates(b, a);
        CHECK_FALSE(both);
    }
}

TEST_CASE("verify_pareto_front on the single-state two-action instance") {
    TabularMdp mdp = make_symmetric_bandit(2);
    CHECK(verify_pareto_front(mdp, {0.4, 0.4}, {}));

    std::vector<TabularPolicy> grid;
    for (int i = 0; i <= 10; ++i) {
        double p = i / 10.0;
        grid.emplace_back(1, 2, Vec{p, 1.0 - p});
    }
    // (0.4,0.4) is dominated by the 50/50 policy's (0.5,0.5).
    CHECK_FALSE(verify_pareto_front(mdp, {0.4, 0.4}, grid));
    // The best grid point does not dominate itself.
    CHECK(verify_pareto_front(mdp, {0.5, 0.5}, grid));
}

TEST_CASE("MDP construction rejects invalid inputs") {
    CHECK_THROWS_AS(TabularMdp(1, 2, 1, 0.99, {1.0, 1.0}, {{1.5, 0.0}}, {1.0}),
                    DomainError); // reward above 1 rejected, not clamped
    CHECK_THROWS_AS(TabularMdp(1, 2, 1, 0.99, {1.0, 1.0}, {{-0.1, 0.0}}, {1.0}),
                    DomainError);
    CHECK_THROWS_AS(TabularMdp(1, 2, 1, 0.99, {0.9, 1.0}, {{1.0, 0.0}}, {1.0}),
                    DomainError); // row does not sum to 1
    CHECK_THROWS_AS(TabularMdp(2, 1, 1, 0.99, {1.0, 0.0, 0.0, 1.0}, {{0.5, 0.5}},
                               {0.6, 0.6}),
                    DomainError); // initial distribution does not sum to 1
    CHECK_THROWS_AS(TabularMdp(1, 2, 1, 0.99, {1.0}, {{1.0, 0.0}}, {1.0}),
                    DimensionMismatch);
}

TEST_CASE("policy rows must be distributions") {
    CHECK_THROWS_AS(TabularPolicy(1, 2, {0.7, 0.7}), DomainError);
    CHECK_THROWS_AS(TabularPolicy(1, 2, {1.2, -0.2}), DomainError);
    CHECK_THROWS_AS(TabularPolicy(1, 2, {1.0}), DimensionMismatch);
}

TEST_CASE("MDP JSON round trip preserves every field") {
    Rng rng(47);
    TabularMdp mdp = random_mdp(3, 2, 2, rng);
    TabularMdp back = TabularMdp::from_json(mdp.to_json());
    CHECK(back.n_states() == mdp.n_states());
    CHECK(back.n_actions() == mdp.n_actions());
    CHECK(back.n_agents() == mdp.n_agents());
    CHECK(back.discount() == mdp.discount());
    CHECK(back.transition() == mdp.transition());
    CHECK(back.rewards() == mdp.rewards());
    CHECK(back.initial_dist() == mdp.initial_dist());
}
