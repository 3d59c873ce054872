#pragma once

#include "fairrl/mdp.hpp"
#include "fairrl/objectives.hpp"

#include <memory>

namespace fairrl {

struct SolverConfig {
    double step_size = 0.1;
    int max_iters = 5000;
    double tolerance = 1e-8;            // objective-improvement stop
    double projection_tolerance = 1e-9; // feasibility residual
    int projection_max_iters = 10000;
    double step_floor = 1e-6;           // backtracking lower bound
    double marginal_floor = 1e-12;      // extract_policy degenerate-state cutoff
};

/// Euclidean projection onto {d >= 0, sum d = 1, flow balance} by Dykstra
/// alternation between the stacked affine equalities (closed form through a
/// precomputed factorization) and the nonnegative orthant. One redundant
/// flow-balance row is dropped before factorizing; the flow rows sum to the
/// zero functional, so keeping all of them would make the system singular.
class FeasiblePolytope {
  public:
    FeasiblePolytope(int n_states, int n_actions, const Vec& kernel,
                     SolverConfig config = {});
    ~FeasiblePolytope();
    FeasiblePolytope(FeasiblePolytope&&) noexcept;
    FeasiblePolytope& operator=(FeasiblePolytope&&) noexcept;

    /// Throws InfeasibleProjection if the residual does not fall below
    /// projection_tolerance within projection_max_iters sweeps.
    OccupancyMeasure project(const Vec& raw) const;

    /// max(|flow residual|, |sum d - 1|) of a candidate table.
    double residual(const Vec& d) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct SolveResult {
    OccupancyMeasure occupancy;
    double objective = 0.0;
    Vec avg_rewards;    // lambda at the solution
    bool converged = true;
    int iterations = 0;
};

/// Projected gradient ascent on the concave occupancy program. Halves the
/// step on an objective decrease (floor SolverConfig::step_floor). A run that
/// exhausts max_iters while still improving is returned with converged=false.
SolveResult solve_occupancy(const TabularMdp& mdp, const ObjectiveFunction& f,
                            const SolverConfig& config = {});

OccupancyMeasure project_feasible(const Vec& raw, const TabularMdp& mdp,
                                  const SolverConfig& config = {});

/// pi(a|s) = d(s,a) / sum_a d(s,a); states whose marginal is at or below
/// marginal_floor get the uniform policy.
TabularPolicy extract_policy(const OccupancyMeasure& d, double marginal_floor = 1e-12);

} // namespace fairrl
