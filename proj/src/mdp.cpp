#include "fairrl/mdp.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstddef>

namespace fairrl {

namespace {
constexpr double kSimplexTol = 1e-9;
}

TabularMdp::TabularMdp(int n_states, int n_actions, int n_agents, double discount,
                       Vec transition, std::vector<Vec> rewards, Vec initial_dist,
                       std::optional<double> diameter)
    : n_states_(n_states), n_actions_(n_actions), n_agents_(n_agents),
      discount_(discount), transition_(std::move(transition)),
      rewards_(std::move(rewards)), initial_dist_(std::move(initial_dist)),
      diameter_(diameter) {
    if (n_states_ <= 0 || n_actions_ <= 0 || n_agents_ <= 0)
        throw DomainError("TabularMdp: dimensions must be positive");
    if (discount_ <= 0.0 || discount_ >= 1.0)
        throw DomainError("TabularMdp: discount must lie in (0,1)");
    const std::size_t sa = static_cast<std::size_t>(n_states_) * n_actions_;
    if (transition_.size() != sa * n_states_)
        throw DimensionMismatch("TabularMdp: transition table size mismatch");
    if (rewards_.size() != static_cast<std::size_t>(n_agents_))
        throw DimensionMismatch("TabularMdp: expected one reward table per agent");
    for (const Vec& table : rewards_) {
        if (table.size() != sa)
            throw DimensionMismatch("TabularMdp: reward table size mismatch");
        for (double r : table)
            if (r < 0.0 || r > 1.0)
                throw DomainError("TabularMdp: rewards must lie in [0,1]");
    }
    if (initial_dist_.size() != static_cast<std::size_t>(n_states_))
        throw DimensionMismatch("TabularMdp: initial distribution size mismatch");
    double rho_sum = 0.0;
    for (double v : initial_dist_) {
        if (v < 0.0) throw DomainError("TabularMdp: initial distribution has negative entry");
        rho_sum += v;
    }
    if (std::abs(rho_sum - 1.0) > kSimplexTol)
        throw DomainError("TabularMdp: initial distribution must sum to 1");
    for (std::size_t row = 0; row < sa; ++row) {
        double p_sum = 0.0;
        for (int s2 = 0; s2 < n_states_; ++s2) {
            double p = transition_[row * n_states_ + s2];
            if (p < 0.0) throw DomainError("TabularMdp: negative transition probability");
            p_sum += p;
        }
        if (std::abs(p_sum - 1.0) > kSimplexTol)
            throw DomainError("TabularMdp: transition row must sum to 1");
    }
}

std::string TabularMdp::to_json() const {
    nlohmann::json j;
    j["n_states"] = n_states_;
    j["n_actions"] = n_actions_;
    j["n_agents"] = n_agents_;
    j["gamma"] = discount_;
    j["initial_dist"] = initial_dist_;
    if (diameter_) j["diameter"] = *diameter_;
    auto& trans = j["transition"] = nlohmann::json::array();
    for (int s = 0; s < n_states_; ++s) {
        nlohmann::json rows = nlohmann::json::array();
        for (int a = 0; a < n_actions_; ++a) {
            nlohmann::json row = nlohmann::json::array();
            for (int s2 = 0; s2 < n_states_; ++s2) row.push_back(p(s, a, s2));
            rows.push_back(std::move(row));
        }
        trans.push_back(std::move(rows));
    }
    auto& rew = j["rewards"] = nlohmann::json::array();
    for (int k = 0; k < n_agents_; ++k) {
        nlohmann::json table = nlohmann::json::array();
        for (int s = 0; s < n_states_; ++s) {
            nlohmann::json row = nlohmann::json::array();
            for (int a = 0; a < n_actions_; ++a) row.push_back(reward(k, s, a));
            table.push_back(std::move(row));
        }
        rew.push_back(std::move(table));
    }
    return j.dump(2);
}

TabularMdp TabularMdp::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    const int S = j.at("n_states").get<int>();
    const int A = j.at("n_actions").get<int>();
    const int K = j.at("n_agents").get<int>();
    const double gamma = j.at("gamma").get<double>();
    Vec trans(static_cast<std::size_t>(S) * A * S);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a)
            for (int s2 = 0; s2 < S; ++s2)
                trans[(static_cast<std::size_t>(s) * A + a) * S + s2] =
                    j.at("transition").at(s).at(a).at(s2).get<double>();
    std::vector<Vec> rewards(K, Vec(static_cast<std::size_t>(S) * A));
    for (int k = 0; k < K; ++k)
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < A; ++a)
                rewards[k][static_cast<std::size_t>(s) * A + a] =
                    j.at("rewards").at(k).at(s).at(a).get<double>();
    Vec rho = j.at("initial_dist").get<Vec>();
    std::optional<double> diam;
    if (j.contains("diameter")) diam = j.at("diameter").get<double>();
    return TabularMdp(S, A, K, gamma, std::move(trans), std::move(rewards),
                      std::move(rho), diam);
}

TabularPolicy::TabularPolicy(int n_states, int n_actions, Vec probs)
    : n_states_(n_states), n_actions_(n_actions), probs_(std::move(probs)) {
    if (probs_.size() != static_cast<std::size_t>(n_states_) * n_actions_)
        throw DimensionMismatch("TabularPolicy: probability table size mismatch");
    for (int s = 0; s < n_states_; ++s) {
        double row_sum = 0.0;
        for (int a = 0; a < n_actions_; ++a) {
            double p = prob(s, a);
            if (p < 0.0) throw DomainError("TabularPolicy: negative probability");
            row_sum += p;
        }
        if (std::abs(row_sum - 1.0) > kSimplexTol)
            throw DomainError("TabularPolicy: action probabilities must sum to 1");
    }
}

TabularPolicy TabularPolicy::uniform(int n_states, int n_actions) {
    Vec probs(static_cast<std::size_t>(n_states) * n_actions,
              1.0 / static_cast<double>(n_actions));
    return TabularPolicy(n_states, n_actions, std::move(probs));
}

Vec OccupancyMeasure::state_marginals() const {
    Vec m(n_states, 0.0);
    for (int s = 0; s < n_states; ++s)
        for (int a = 0; a < n_actions; ++a) m[s] += at(s, a);
    return m;
}

std::string OccupancyMeasure::to_json() const {
    nlohmann::json j;
    j["n_states"] = n_states;
    j["n_actions"] = n_actions;
    auto& table = j["d"] = nlohmann::json::array();
    for (int s = 0; s < n_states; ++s) {
        nlohmann::json row = nlohmann::json::array();
        for (int a = 0; a < n_actions; ++a) row.push_back(at(s, a));
        table.push_back(std::move(row));
    }
    return j.dump(2);
}

PolicyEvaluation steady_state(const TabularMdp& mdp, const TabularPolicy& policy,
                              double tolerance, long max_iters) {
    const int S = mdp.n_states();
    const int A = mdp.n_actions();
    if (policy.n_states() != S || policy.n_actions() != A)
        throw DimensionMismatch("steady_state: policy does not match MDP dimensions");

    // Policy-induced chain P_pi(s, s') = sum_a pi(a|s) P(s,a,s').
    Vec chain(static_cast<std::size_t>(S) * S, 0.0);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) {
            double pa = policy.prob(s, a);
            if (pa == 0.0) continue;
            for (int s2 = 0; s2 < S; ++s2)
                chain[static_cast<std::size_t>(s) * S + s2] += pa * mdp.p(s, a, s2);
        }

    Vec d(S, 1.0 / static_cast<double>(S));
    Vec next(S);
    bool converged = false;
    for (long it = 0; it < max_iters; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int s = 0; s < S; ++s) {
            if (d[s] == 0.0) continue;
            for (int s2 = 0; s2 < S; ++s2)
                next[s2] += d[s] * chain[static_cast<std::size_t>(s) * S + s2];
        }
        double diff = 0.0, total = 0.0;
        for (int s = 0; s < S; ++s) {
            diff += std::abs(next[s] - d[s]);
            total += next[s];
        }
        for (int s = 0; s < S; ++s) d[s] = next[s] / total;
        if (diff < tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NonErgodicChain("steady_state: power iteration did not converge");

    PolicyEvaluation out;
    out.steady_state_dist = d;
    out.occupancy.n_states = S;
    out.occupancy.n_actions = A;
    out.occupancy.d.resize(static_cast<std::size_t>(S) * A);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a)
            out.occupancy.d[static_cast<std::size_t>(s) * A + a] = d[s] * policy.prob(s, a);
    out.avg_rewards.assign(mdp.n_agents(), 0.0);
    for (int k = 0; k < mdp.n_agents(); ++k)
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < A; ++a)
                out.avg_rewards[k] += mdp.reward(k, s, a) * out.occupancy.at(s, a);
    return out;
}

bool pareto_dominates(const Vec& a, const Vec& b, double strict_tol) {
    if (a.size() != b.size() || a.empty())
        throw DimensionMismatch("pareto_dominates: vectors must have equal positive length");
    bool strict = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] < b[k]) return false;
        if (a[k] > b[k] + strict_tol) strict = true;
    }
    return strict;
}

bool verify_pareto_front(const TabularMdp& mdp, const Vec& candidate,
                         const std::vector<TabularPolicy>& policy_grid) {
    for (const TabularPolicy& pi : policy_grid) {
        PolicyEvaluation eval = steady_state(mdp, pi);
        if (pareto_dominates(eval.avg_rewards, candidate)) return false;
    }
    return true;
}

} // namespace fairrl
