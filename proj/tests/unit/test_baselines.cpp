#include "fairrl/baselines.hpp"

#include <doctest.h>

#include <cmath>

using namespace fairrl;

TEST_CASE("BGE first pick is the max-rate agent") {
    BgeScheduler bge(2);
    CHECK(bge.select({1.5, 2.25}) == 1);
}

TEST_CASE("BGE favors the starved agent") {
    BgeScheduler bge(2);
    bge.credit(0, 10.0);
    bge.credit(1, 1.0);
    CHECK(bge.select({1.0, 1.0}) == 1);
}

TEST_CASE("BGE ties break to the lowest index") {
    BgeScheduler bge(3);
    CHECK(bge.select({1.0, 1.0, 1.0}) == 0);
    bge.credit(0, 2.0);
    bge.credit(1, 2.0);
    bge.credit(2, 2.0);
    CHECK(bge.select({1.0, 1.0, 1.0}) == 0);
}

TEST_CASE("BGE selection is scale invariant") {
    Rng rng(43);
    for (int trial = 0; trial < 200; ++trial) {
        BgeScheduler a(3), b(3);
        const double c = 0.1 + 10.0 * rng.uniform();
        Vec rates(3), cum(3);
        for (int k = 0; k < 3; ++k) {
            rates[k] = rng.uniform();
            cum[k] = rng.uniform();
            a.credit(k, cum[k]);
            b.credit(k, c * cum[k]);
        }
        Vec scaled = rates;
        for (double& r : scaled) r *= c;
        CHECK(a.select(rates) == b.select(scaled));
    }
}

TEST_CASE("BGE time-shares the symmetric two-agent instance evenly") {
    BgeScheduler bge(2);
    long picks0 = 0;
    const long T = 10000;
    for (long t = 0; t < T; ++t) {
        const int pick = bge.select({1.0, 1.0});
        bge.credit(pick, 1.0);
        if (pick == 0) ++picks0;
    }
    CHECK(std::abs(static_cast<double>(picks0) / T - 0.5) < 0.01);
}

TEST_CASE("BGE validates the rate vector length") {
    BgeScheduler bge(2);
    CHECK_THROWS_AS(bge.select({1.0, 2.0, 3.0}), DimensionMismatch);
}

TEST_CASE("longest queue first with lowest-index ties") {
    CHECK(lqf_select({3, 5, 2}) == 1);
    CHECK(lqf_select({0, 0}) == 0);
    CHECK(lqf_select({4, 4}) == 0);
    CHECK_THROWS_AS(lqf_select({}), DomainError);
}

TEST_CASE("uniform selection covers all agents evenly") {
    Rng rng(47);
    CHECK(uniform_select(1, rng) == 0);

    Vec freq(4, 0.0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) freq[uniform_select(4, rng)] += 1.0;
    for (int k = 0; k < 4; ++k) CHECK(std::abs(freq[k] / n - 0.25) < 0.01);

    Rng a(5), b(5);
    for (int i = 0; i < 100; ++i) CHECK(uniform_select(4, a) == uniform_select(4, b));
    CHECK_THROWS_AS(uniform_select(0, rng), DomainError);
}

TEST_CASE("SARSA update arithmetic") {
    SarsaAgent agent(2, 2);
    agent.update(0, 0, 0.0, 1, 1);
    CHECK(agent.q(0, 0) == 0.0); // zero TD error

    agent.update(0, 0, 1.0, 1, 1);
    CHECK(agent.q(0, 0) == doctest::Approx(0.01));
}

TEST_CASE("SARSA self-loop converges to the geometric fixed point") {
    SarsaAgent agent(1, 1);
    const double f = 0.7;
    for (int i = 0; i < 10000; ++i) agent.update(0, 0, f, 0, 0);
    CHECK(std::abs(agent.q(0, 0) - 10.0 * f) < 0.01 * 10.0 * f); // f/(1-0.9)
}

TEST_CASE("SARSA Q-values stay bounded by the reward scale") {
    SarsaAgent agent(2, 2);
    Rng rng(53);
    int s = 0, a = agent.select(0, rng);
    for (int i = 0; i < 20000; ++i) {
        const int s2 = rng.uniform_int(2);
        const int a2 = agent.select(s2, rng);
        agent.update(s, a, rng.uniform(), s2, a2);
        s = s2;
        a = a2;
    }
    for (int st = 0; st < 2; ++st)
        for (int ac = 0; ac < 2; ++ac) CHECK(std::abs(agent.q(st, ac)) <= 10.0 + 1e-9);
}

TEST_CASE("SARSA exploitation picks the greedy action") {
    SarsaAgent agent(1, 3, 0.9, 0.0, 0.01); // epsilon 0: fully greedy
    agent.update(0, 2, 1.0, 0, 2);
    Rng rng(59);
    for (int i = 0; i < 20; ++i) CHECK(agent.select(0, rng) == 2);
}
