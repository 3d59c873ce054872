#include "fairrl/occupancy_solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace fairrl {

struct FeasiblePolytope::Impl {
    int S = 0;
    int A = 0;
    SolverConfig config;
    Eigen::MatrixXd A_eq;  // (S x S*A): S-1 flow rows + sum-to-one row
    Eigen::VectorXd b_eq;
    Eigen::LDLT<Eigen::MatrixXd> gram; // factorization of A_eq * A_eq^T
};

FeasiblePolytope::FeasiblePolytope(int n_states, int n_actions, const Vec& kernel,
                                   SolverConfig config)
    : impl_(std::make_unique<Impl>()) {
    impl_->S = n_states;
    impl_->A = n_actions;
    impl_->config = config;
    const int S = n_states, A = n_actions;
    const int n = S * A;
    const int m = S; // S-1 flow rows plus the simplex row
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, n);
    // Flow balance for s' = 0..S-2: sum_a d(s',a) - sum_{s,a} P(s'|s,a) d(s,a) = 0.
    for (int sp = 0; sp + 1 < S; ++sp) {
        for (int a = 0; a < A; ++a) M(sp, sp * A + a) += 1.0;
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < A; ++a)
                M(sp, s * A + a) -= kernel[(static_cast<std::size_t>(s) * A + a) * S + sp];
    }
    for (int j = 0; j < n; ++j) M(m - 1, j) = 1.0;
    impl_->b_eq = Eigen::VectorXd::Zero(m);
    impl_->b_eq(m - 1) = 1.0;
    impl_->A_eq = std::move(M);
    impl_->gram.compute(impl_->A_eq * impl_->A_eq.transpose());
}

FeasiblePolytope::~FeasiblePolytope() = default;
FeasiblePolytope::FeasiblePolytope(FeasiblePolytope&&) noexcept = default;
FeasiblePolytope& FeasiblePolytope::operator=(FeasiblePolytope&&) noexcept = default;

double FeasiblePolytope::residual(const Vec& d) const {
    Eigen::Map<const Eigen::VectorXd> x(d.data(), d.size());
    return (impl_->A_eq * x - impl_->b_eq).cwiseAbs().maxCoeff();
}

OccupancyMeasure FeasiblePolytope::project(const Vec& raw) const {
    const int n = impl_->S * impl_->A;
    if (static_cast<int>(raw.size()) != n)
        throw DimensionMismatch("project: table size mismatch");
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(raw.data(), n);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
    const double tol = impl_->config.projection_tolerance;

    auto affine = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd r = impl_->A_eq * v - impl_->b_eq;
        return (v - impl_->A_eq.transpose() * impl_->gram.solve(r)).eval();
    };

    bool done = false;
    for (int it = 0; it < impl_->config.projection_max_iters; ++it) {
        Eigen::VectorXd y = affine(x + p);
        p = x + p - y;
        Eigen::VectorXd z = (y + q).cwiseMax(0.0);
        q = y + q - z;
        double change = (z - x).lpNorm<Eigen::Infinity>();
        x = z;
        double res = (impl_->A_eq * x - impl_->b_eq).cwiseAbs().maxCoeff();
        if (res < tol && change < tol) {
            done = true;
            break;
        }
    }
    if (!done)
        throw InfeasibleProjection("project: Dykstra alternation did not converge");

    OccupancyMeasure out;
    out.n_states = impl_->S;
    out.n_actions = impl_->A;
    out.d.assign(x.data(), x.data() + n);
    for (double& v : out.d) v = std::max(v, 0.0);
    return out;
}

OccupancyMeasure project_feasible(const Vec& raw, const TabularMdp& mdp,
                                  const SolverConfig& config) {
    FeasiblePolytope poly(mdp.n_states(), mdp.n_actions(), mdp.transition(), config);
    return poly.project(raw);
}

namespace {

Vec lambda_of(const TabularMdp& mdp, const Vec& d) {
    Vec lambda(mdp.n_agents(), 0.0);
    const int S = mdp.n_states(), A = mdp.n_actions();
    for (int k = 0; k < mdp.n_agents(); ++k)
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < A; ++a)
                lambda[k] += mdp.reward(k, s, a) * d[static_cast<std::size_t>(s) * A + a];
    return lambda;
}

} // namespace

SolveResult solve_occupancy(const TabularMdp& mdp, const ObjectiveFunction& f,
                            const SolverConfig& config) {
    const int S = mdp.n_states(), A = mdp.n_actions();
    const int n = S * A;
    FeasiblePolytope poly(S, A, mdp.transition(), config);

    Vec d(n, 1.0 / static_cast<double>(n));
    d = poly.project(d).d;
    double obj = f.evaluate(lambda_of(mdp, d));
    double eta = config.step_size;

    SolveResult result;
    result.converged = true;
    int it = 0;
    for (; it < config.max_iters; ++it) {
        Vec g_lambda = f.gradient(lambda_of(mdp, d));
        Vec grad(n, 0.0);
        for (int k = 0; k < mdp.n_agents(); ++k)
            for (int s = 0; s < S; ++s)
                for (int a = 0; a < A; ++a)
                    grad[static_cast<std::size_t>(s) * A + a] +=
                        g_lambda[k] * mdp.reward(k, s, a);

        // Backtracking ascent step: halve eta while the projected step would
        // lower the objective.
        bool stalled = false;
        Vec cand;
        double cand_obj = obj;
        for (;;) {
            cand.assign(d.begin(), d.end());
            for (int j = 0; j < n; ++j) cand[j] += eta * grad[j];
            cand = poly.project(cand).d;
            cand_obj = f.evaluate(lambda_of(mdp, cand));
            if (cand_obj >= obj - 1e-12) break;
            eta *= 0.5;
            if (eta < config.step_floor) {
                stalled = true;
                break;
            }
        }
        if (stalled) break;
        double improvement = cand_obj - obj;
        d = std::move(cand);
        obj = cand_obj;
        if (improvement < config.tolerance) break;
        if (it + 1 == config.max_iters) result.converged = false;
    }

    result.occupancy.n_states = S;
    result.occupancy.n_actions = A;
    result.occupancy.d = std::move(d);
    result.avg_rewards = lambda_of(mdp, result.occupancy.d);
    result.objective = obj;
    result.iterations = it;
    return result;
}

TabularPolicy extract_policy(const OccupancyMeasure& d, double marginal_floor) {
    const int S = d.n_states, A = d.n_actions;
    Vec probs(static_cast<std::size_t>(S) * A);
    for (int s = 0; s < S; ++s) {
        double marginal = 0.0;
        for (int a = 0; a < A; ++a) marginal += std::max(d.at(s, a), 0.0);
        for (int a = 0; a < A; ++a) {
            probs[static_cast<std::size_t>(s) * A + a] =
                marginal > marginal_floor ? std::max(d.at(s, a), 0.0) / marginal
                                          : 1.0 / static_cast<double>(A);
        }
    }
    return TabularPolicy(S, A, std::move(probs));
}

} // namespace fairrl
