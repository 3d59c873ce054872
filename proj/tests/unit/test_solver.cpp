#include "fairrl/occupancy_solver.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace fairrl;
using namespace fairrl::testing;

TEST_CASE("dominant action takes all the occupancy mass") {
    SolveResult result = solve_occupancy(make_k1_bandit(), ObjectiveFunction::identity());
    CHECK(result.occupancy.at(0, 0) > 0.999);
    CHECK(result.occupancy.at(0, 1) < 0.001);
    CHECK(result.avg_rewards[0] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("symmetric bandit with log utility splits evenly") {
    SolveResult result =
        solve_occupancy(make_symmetric_bandit(2), ObjectiveFunction::proportional_fair());
    CHECK(result.occupancy.at(0, 0) == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(result.occupancy.at(0, 1) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("solver output is feasible") {
    Rng rng(53);
    for (int trial = 0; trial < 5; ++trial) {
        TabularMdp mdp = random_mdp(3, 2, 2, rng);
        SolveResult result =
            solve_occupancy(mdp, ObjectiveFunction::proportional_fair());
        const Vec& d = result.occupancy.d;

        double total = 0.0;
        for (double v : d) {
            CHECK(v >= 0.0);
            total += v;
        }
        CHECK(std::abs(total - 1.0) < 1e-6);

        for (int sp = 0; sp < 3; ++sp) {
            double out_flow = 0.0, in_flow = 0.0;
            for (int a = 0; a < 2; ++a) out_flow += result.occupancy.at(sp, a);
            for (int s = 0; s < 3; ++s)
                for (int a = 0; a < 2; ++a)
                    in_flow += mdp.p(s, a, sp) * result.occupancy.at(s, a);
            CHECK(std::abs(out_flow - in_flow) < 1e-6);
        }
    }
}

TEST_CASE("solver beats a random-policy search on a random instance") {
    Rng rng(59);
    TabularMdp mdp = random_mdp(3, 2, 2, rng);
    ObjectiveFunction f = ObjectiveFunction::proportional_fair();
    SolveResult result = solve_occupancy(mdp, f);

    double best = -1e300;
    for (int i = 0; i < 2000; ++i) {
        TabularPolicy pi = random_policy(3, 2, rng);
        best = std::max(best, f.evaluate(steady_state(mdp, pi).avg_rewards));
    }
    CHECK(result.objective >= best - 1e-3);
}

TEST_CASE("max-min solves as the same program") {
    // Grid-search oracle on the single-state instance: max_p min(p, 1-p) = 0.5.
    SolveResult result =
        solve_occupancy(make_symmetric_bandit(2), ObjectiveFunction::max_min());
    CHECK(result.objective == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("extract_policy is the conditional of the occupancy") {
    OccupancyMeasure d{1, 2, {0.3, 0.7}};
    TabularPolicy pi = extract_policy(d);
    CHECK(pi.prob(0, 0) == doctest::Approx(0.3));
    CHECK(pi.prob(0, 1) == doctest::Approx(0.7));
}

TEST_CASE("zero-marginal states fall back to the uniform policy") {
    OccupancyMeasure d{2, 2, {0.5, 0.5, 0.0, 0.0}};
    TabularPolicy pi = extract_policy(d);
    CHECK(pi.prob(1, 0) == doctest::Approx(0.5));
    CHECK(pi.prob(1, 1) == doctest::Approx(0.5));
}

TEST_CASE("solve / extract / steady_state round trip is a fixed point") {
    Rng rng(61);
    for (int trial = 0; trial < 5; ++trial) {
        TabularMdp mdp = random_mdp(3, 2, 2, rng);
        SolveResult result =
            solve_occupancy(mdp, ObjectiveFunction::proportional_fair());
        TabularPolicy pi = extract_policy(result.occupancy);
        PolicyEvaluation eval = steady_state(mdp, pi);
        CHECK(l1_distance(eval.occupancy.d, result.occupancy.d) < 1e-6);
    }
}

TEST_CASE("projection leaves feasible points unchanged") {
    Rng rng(67);
    TabularMdp mdp = random_mdp(2, 2, 1, rng);
    TabularPolicy pi = random_policy(2, 2, rng);
    Vec feasible = steady_state(mdp, pi).occupancy.d;
    OccupancyMeasure projected = project_feasible(feasible, mdp);
    CHECK(l1_distance(projected.d, feasible) < 1e-12);
}

TEST_CASE("projection of a constant table on one state is uniform") {
    TabularMdp mdp = make_symmetric_bandit(2);
    OccupancyMeasure projected = project_feasible({3.0, 3.0}, mdp);
    CHECK(projected.at(0, 0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(projected.at(0, 1) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("projection of an infeasible table is feasible and distance-minimal") {
    Rng rng(71);
    TabularMdp mdp = random_mdp(2, 2, 1, rng);
    Vec raw{0.9, -0.2, 0.7, 0.4};
    OccupancyMeasure projected = project_feasible(raw, mdp);

    FeasiblePolytope poly(2, 2, mdp.transition());
    CHECK(poly.residual(projected.d) < 1e-9);
    for (double v : projected.d) CHECK(v >= 0.0);

    // Variational characterization of the Euclidean projection: the residual
    // direction makes an obtuse angle with every feasible direction.
    for (int trial = 0; trial < 200; ++trial) {
        Vec feasible = steady_state(mdp, random_policy(2, 2, rng)).occupancy.d;
        double inner = 0.0, dist_raw = 0.0, dist_feas = 0.0;
        for (int i = 0; i < 4; ++i) {
            inner += (raw[i] - projected.d[i]) * (feasible[i] - projected.d[i]);
            dist_raw += (raw[i] - projected.d[i]) * (raw[i] - projected.d[i]);
            dist_feas += (raw[i] - feasible[i]) * (raw[i] - feasible[i]);
        }
        CHECK(inner <= 1e-6);
        CHECK(dist_raw <= dist_feas + 1e-9);
    }
}

TEST_CASE("projection rejects mismatched tables") {
    TabularMdp mdp = make_symmetric_bandit(2);
    CHECK_THROWS_AS(project_feasible({1.0, 2.0, 3.0}, mdp), DimensionMismatch);
}

TEST_CASE("iteration cap with a tight tolerance reports non-convergence") {
    SolverConfig cfg;
    cfg.max_iters = 3;
    cfg.tolerance = 1e-16;
    Rng rng(73);
    TabularMdp mdp = random_mdp(3, 2, 2, rng);
    SolveResult result = solve_occupancy(mdp, ObjectiveFunction::proportional_fair(), cfg);
    CHECK_FALSE(result.converged);
    CHECK(result.iterations == 3);
}

TEST_CASE("objective never decreases from the feasible start") {
    Rng rng(79);
    for (int trial = 0; trial < 5; ++trial) {
        TabularMdp mdp = random_mdp(3, 2, 2, rng);
        ObjectiveFunction f = ObjectiveFunction::proportional_fair();
        Vec start(6, 1.0 / 6.0);
        const double initial = f.evaluate([&] {
            OccupancyMeasure d0 = project_feasible(start, mdp);
            Vec lambda(2, 0.0);
            for (int k = 0; k < 2; ++k)
                for (int s = 0; s < 3; ++s)
                    for (int a = 0; a < 2; ++a)
                        lambda[k] += mdp.reward(k, s, a) * d0.at(s, a);
            return lambda;
        }());
        SolveResult result = solve_occupancy(mdp, f);
        CHECK(result.objective >= initial - 1e-10);
    }
}
