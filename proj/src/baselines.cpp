#include "fairrl/baselines.hpp"

#include <algorithm>

namespace fairrl {

int BgeScheduler::select(const Vec& current_rates) const {
    if (current_rates.size() != cumulative_.size())
        throw DimensionMismatch("BgeScheduler: rate vector size mismatch");
    int best = 0;
    double best_ratio = -1.0;
    for (std::size_t k = 0; k < current_rates.size(); ++k) {
        double ratio = current_rates[k] / std::max(cumulative_[k], floor_);
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best = static_cast<int>(k);
        }
    }
    return best;
}

int lqf_select(const std::vector<int>& queue_lengths) {
    if (queue_lengths.empty()) throw DomainError("lqf_select: no queues");
    return static_cast<int>(
        std::max_element(queue_lengths.begin(), queue_lengths.end()) -
        queue_lengths.begin());
}

int uniform_select(int n_agents, Rng& rng) {
    if (n_agents < 1) throw DomainError("uniform_select: need at least one agent");
    return rng.uniform_int(n_agents);
}

int SarsaAgent::select(int state, Rng& rng) const {
    if (rng.uniform() < epsilon_) return rng.uniform_int(n_actions_);
    int best = 0;
    for (int a = 1; a < n_actions_; ++a)
        if (q(state, a) > q(state, best)) best = a;
    return best;
}

void SarsaAgent::update(int s, int a, double fairness_reward, int s2, int a2) {
    double& qa = q_[static_cast<std::size_t>(s) * n_actions_ + a];
    qa += lr_ * (fairness_reward + gamma_ * q(s2, a2) - qa);
}

} // namespace fairrl
