#include "fairrl/envs.hpp"

#include <cmath>

namespace fairrl {

namespace {
// Table of practically observable LTE rates (Mbps) per agent and condition.
constexpr double kGoodRates[6] = {1.50, 2.25, 1.25, 1.50, 1.75, 1.25};
constexpr double kBadRates[6] = {0.768, 1.00, 0.384, 1.12, 0.384, 1.12};
} // namespace

CellularFiniteEnv::CellularFiniteEnv(int n_agents) : n_agents_(n_agents) {
    if (n_agents < 1 || n_agents > 6)
        throw DomainError("CellularFiniteEnv: supports 1..6 agents (rate table)");
    good_rates_.assign(kGoodRates, kGoodRates + n_agents);
    bad_rates_.assign(kBadRates, kBadRates + n_agents);
}

int CellularFiniteEnv::reset(Rng& rng) {
    state_ = 0;
    for (int k = 0; k < n_agents_; ++k)
        if (rng.uniform() < 0.5) state_ |= (1 << k);
    return state_;
}

FiniteStep CellularFiniteEnv::step(int action, Rng& rng) {
    if (action < 0 || action >= n_agents_)
        throw InvalidAction("CellularFiniteEnv: action out of range");
    FiniteStep out;
    out.rewards.assign(n_agents_, 0.0);
    const bool good = (state_ >> action) & 1;
    out.rewards[action] = rate(action, good) / kMaxRate;
    int next = state_;
    for (int k = 0; k < n_agents_; ++k) {
        if (rng.uniform() < kStayProb) continue;
        // resample uniformly from {good, bad}
        if (rng.uniform() < 0.5)
            next |= (1 << k);
        else
            next &= ~(1 << k);
    }
    state_ = next;
    out.next_state = state_;
    return out;
}

Vec CellularFiniteEnv::current_rates() const {
    Vec r(n_agents_);
    for (int k = 0; k < n_agents_; ++k) r[k] = rate(k, (state_ >> k) & 1);
    return r;
}

Vec CellularFiniteEnv::observation_bits() const {
    Vec bits(n_agents_);
    for (int k = 0; k < n_agents_; ++k) bits[k] = (state_ >> k) & 1;
    return bits;
}

TabularMdp CellularFiniteEnv::to_mdp(double gamma) const {
    const int K = n_agents_;
    const int S = 1 << K;
    const double stay = kStayProb + (1.0 - kStayProb) * 0.5; // 0.9
    Vec trans(static_cast<std::size_t>(S) * K * S);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < K; ++a)
            for (int s2 = 0; s2 < S; ++s2) {
                double p = 1.0;
                for (int k = 0; k < K; ++k) {
                    bool same = ((s >> k) & 1) == ((s2 >> k) & 1);
                    p *= same ? stay : 1.0 - stay;
                }
                trans[(static_cast<std::size_t>(s) * K + a) * S + s2] = p;
            }
    std::vector<Vec> rewards(K, Vec(static_cast<std::size_t>(S) * K, 0.0));
    for (int k = 0; k < K; ++k)
        for (int s = 0; s < S; ++s)
            rewards[k][static_cast<std::size_t>(s) * K + k] =
                rate(k, (s >> k) & 1) / kMaxRate;
    Vec rho(S, 1.0 / static_cast<double>(S));
    return TabularMdp(S, K, K, gamma, std::move(trans), std::move(rewards), std::move(rho));
}

GaussMarkovEnv::GaussMarkovEnv(int n_agents, double beta)
    : n_agents_(n_agents), beta_(beta) {
    if (n_agents < 1) throw DomainError("GaussMarkovEnv: need at least one agent");
    if (beta < 0.0 || beta > 1.0) throw DomainError("GaussMarkovEnv: beta in [0,1]");
    power_.resize(n_agents_);
    for (int k = 0; k < n_agents_; ++k)
        power_[k] = std::pow(static_cast<double>(k + 1), -0.2);
    x_.assign(n_agents_, 0.0);
}

Vec GaussMarkovEnv::reset(Rng& rng) {
    for (double& x : x_) x = rng.normal();
    return x_;
}

PgStep GaussMarkovEnv::step(int action, Rng& rng) {
    if (action < 0 || action >= n_agents_)
        throw InvalidAction("GaussMarkovEnv: action out of range");
    PgStep out;
    out.rewards.assign(n_agents_, 0.0);
    out.rewards[action] = power_[action] * x_[action] * x_[action];
    const double carry = std::sqrt(1.0 - beta_ * beta_);
    for (double& x : x_) x = carry * x + beta_ * rng.normal();
    out.observation = x_;
    return out;
}

double qoe(double wait) {
    return (1.0 - std::exp(-3.0)) / (1.0 + std::exp(wait - 3.0));
}

MultiQueueEnv::MultiQueueEnv(Vec arrival_rates, int capacity)
    : n_agents_(static_cast<int>(arrival_rates.size())), capacity_(capacity),
      rates_(std::move(arrival_rates)) {
    if (n_agents_ < 1) throw DomainError("MultiQueueEnv: need at least one queue");
    if (capacity_ < 1) throw DomainError("MultiQueueEnv: capacity must be positive");
    for (double r : rates_)
        if (r < 0.0 || r > 1.0) throw DomainError("MultiQueueEnv: arrival rates in [0,1]");
    queues_.resize(n_agents_);
    arrivals_.assign(n_agents_, 0);
    served_.assign(n_agents_, 0);
    dropped_.assign(n_agents_, 0);
}

MultiQueueEnv MultiQueueEnv::high_load(int k) {
    static const Vec kRates{0.2, 0.1, 0.05, 0.25, 0.15, 0.21, 0.01, 0.3};
    if (k < 1 || k > 8) throw DomainError("MultiQueueEnv: 1..8 queues");
    return MultiQueueEnv(Vec(kRates.begin(), kRates.begin() + k), 100);
}

MultiQueueEnv MultiQueueEnv::low_load(int k) {
    static const Vec kRates{0.014, 0.028, 0.042, 0.056, 0.069, 0.083, 0.097, 0.11};
    if (k < 1 || k > 8) throw DomainError("MultiQueueEnv: 1..8 queues");
    return MultiQueueEnv(Vec(kRates.begin(), kRates.begin() + k), 10);
}

Vec MultiQueueEnv::reset(Rng&) {
    t_ = 0;
    for (auto& q : queues_) q.clear();
    std::fill(arrivals_.begin(), arrivals_.end(), 0);
    std::fill(served_.begin(), served_.end(), 0);
    std::fill(dropped_.begin(), dropped_.end(), 0);
    return observation();
}

PgStep MultiQueueEnv::step(int action, Rng& rng) {
    if (action < 0 || action >= n_agents_)
        throw InvalidAction("MultiQueueEnv: action out of range");
    PgStep out;
    out.rewards.assign(n_agents_, 0.0);
    ++t_;
    if (!queues_[action].empty()) {
        long arrived = queues_[action].front();
        queues_[action].pop_front();
        out.rewards[action] = qoe(static_cast<double>(t_ - arrived));
        ++served_[action];
    }
    for (int k = 0; k < n_agents_; ++k) {
        if (rng.uniform() < rates_[k]) {
            ++arrivals_[k];
            if (static_cast<int>(queues_[k].size()) < capacity_)
                queues_[k].push_back(t_);
            else
                ++dropped_[k];
        }
    }
    out.observation = observation();
    return out;
}

std::vector<int> MultiQueueEnv::queue_lengths() const {
    std::vector<int> lengths(n_agents_);
    for (int k = 0; k < n_agents_; ++k) lengths[k] = static_cast<int>(queues_[k].size());
    return lengths;
}

Vec MultiQueueEnv::observation() const {
    Vec obs(n_agents_);
    for (int k = 0; k < n_agents_; ++k) obs[k] = static_cast<double>(queues_[k].size());
    return obs;
}

} // namespace fairrl
