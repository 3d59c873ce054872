#include "fairrl/posterior.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <ostream>

namespace fairrl {

DirichletPosterior::DirichletPosterior(int n_states, int n_actions, int n_agents,
                                       double omega)
    : S_(n_states), A_(n_actions), K_(n_agents) {
    if (S_ <= 0 || A_ <= 0 || K_ <= 0)
        throw DomainError("DirichletPosterior: dimensions must be positive");
    const std::size_t sa = static_cast<std::size_t>(S_) * A_;
    counts_.assign(sa * S_, 1.0);
    scaled_.assign(sa * S_, omega);
    reward_sums_.assign(K_, Vec(sa, 0.0));
    visits_.assign(sa, 0);
}

void DirichletPosterior::record(int s, int a, const Vec& rewards, int next_state) {
    if (static_cast<int>(rewards.size()) != K_)
        throw DimensionMismatch("DirichletPosterior: reward vector size mismatch");
    const std::size_t sa = static_cast<std::size_t>(s) * A_ + a;
    counts_[sa * S_ + next_state] += 1.0;
    for (int k = 0; k < K_; ++k) reward_sums_[k][sa] += rewards[k];
    ++visits_[sa];
}

double DirichletPosterior::count_total(int s, int a) const {
    const std::size_t sa = static_cast<std::size_t>(s) * A_ + a;
    double total = 0.0;
    for (int s2 = 0; s2 < S_; ++s2) total += counts_[sa * S_ + s2];
    return total;
}

double DirichletPosterior::reward_estimate(int agent, int s, int a) const {
    const std::size_t sa = static_cast<std::size_t>(s) * A_ + a;
    const double denom = static_cast<double>(std::max<long>(visits_[sa], 1));
    return reward_sums_[agent][sa] / denom;
}

std::vector<Vec> DirichletPosterior::reward_estimates() const {
    std::vector<Vec> tables(K_, Vec(static_cast<std::size_t>(S_) * A_));
    for (int k = 0; k < K_; ++k)
        for (int s = 0; s < S_; ++s)
            for (int a = 0; a < A_; ++a)
                tables[k][static_cast<std::size_t>(s) * A_ + a] = reward_estimate(k, s, a);
    return tables;
}

void DirichletPosterior::rescale(double omega, double kappa) {
    if (kappa <= 0.0) throw DomainError("DirichletPosterior: kappa must be positive");
    for (std::size_t i = 0; i < counts_.size(); ++i)
        scaled_[i] = (counts_[i] + omega) / kappa;
}

Vec DirichletPosterior::sample_row(int s, int a, Rng& rng) const {
    const std::size_t sa = static_cast<std::size_t>(s) * A_ + a;
    Vec alpha(counts_.begin() + sa * S_, counts_.begin() + (sa + 1) * S_);
    return rng.dirichlet(alpha);
}

Vec DirichletPosterior::sample_row_scaled(int s, int a, Rng& rng) const {
    const std::size_t sa = static_cast<std::size_t>(s) * A_ + a;
    Vec alpha(scaled_.begin() + sa * S_, scaled_.begin() + (sa + 1) * S_);
    return rng.dirichlet(alpha);
}

std::string DirichletPosterior::to_json() const {
    nlohmann::json j;
    j["n_states"] = S_;
    j["n_actions"] = A_;
    j["n_agents"] = K_;
    j["counts"] = counts_;
    j["scaled"] = scaled_;
    j["visits"] = visits_;
    j["reward_sums"] = reward_sums_;
    return j.dump();
}

DirichletPosterior DirichletPosterior::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    DirichletPosterior post(j.at("n_states").get<int>(), j.at("n_actions").get<int>(),
                            j.at("n_agents").get<int>());
    post.counts_ = j.at("counts").get<Vec>();
    post.scaled_ = j.at("scaled").get<Vec>();
    post.visits_ = j.at("visits").get<std::vector<long>>();
    post.reward_sums_ = j.at("reward_sums").get<std::vector<Vec>>();
    return post;
}

namespace {

Vec sample_kernel_with(const DirichletPosterior& post, Rng& rng) {
    const int S = post.n_states(), A = post.n_actions();
    Vec kernel(static_cast<std::size_t>(S) * A * S);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) {
            Vec row = post.sample_row(s, a, rng);
            for (int s2 = 0; s2 < S; ++s2)
                kernel[(static_cast<std::size_t>(s) * A + a) * S + s2] = row[s2];
        }
    return kernel;
}

ExtendedMdp build_extended_with(const DirichletPosterior& post, const OpsConfig& cfg,
                                Rng& rng) {
    const int S = post.n_states(), A = post.n_actions(), psi = cfg.psi;
    ExtendedMdp ext;
    ext.n_states = S;
    ext.n_base_actions = A;
    ext.psi = psi;
    ext.kernels.assign(static_cast<std::size_t>(S) * A * psi * S, 0.0);
    const double log4s = std::log(4.0 * S);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) {
            const double total = post.count_total(s, a);
            const bool posterior_branch = total >= cfg.optimism_threshold;
            Vec p_minus;
            if (!posterior_branch) {
                p_minus.resize(S);
                for (int i = 0; i < S; ++i) {
                    const double p_hat = post.count(s, a, i) / total;
                    const double delta =
                        std::min(std::sqrt(3.0 * p_hat * log4s / total) + 3.0 * log4s / total,
                                 p_hat);
                    p_minus[i] = p_hat - delta;
                }
            }
            for (int j = 0; j < psi; ++j) {
                Vec row;
                if (posterior_branch) {
                    row = post.sample_row_scaled(s, a, rng);
                } else {
                    row = p_minus;
                    double leftover = 1.0;
                    for (double v : row) leftover -= v;
                    row[rng.uniform_int(S)] += leftover;
                }
                const std::size_t base =
                    (static_cast<std::size_t>(s) * A * psi + a * psi + j) *
                    static_cast<std::size_t>(S);
                for (int s2 = 0; s2 < S; ++s2) ext.kernels[base + s2] = row[s2];
            }
        }
    return ext;
}

TabularPolicy plan_policy(const DirichletPosterior& post, const Vec& kernel,
                          int n_actions, const ObjectiveFunction& f,
                          const SolverConfig& solver, int rewards_replication) {
    const int S = post.n_states(), A_base = post.n_actions();
    std::vector<Vec> rhat = post.reward_estimates();
    std::vector<Vec> rewards(post.n_agents(),
                             Vec(static_cast<std::size_t>(S) * n_actions));
    for (int k = 0; k < post.n_agents(); ++k)
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < A_base; ++a)
                for (int j = 0; j < rewards_replication; ++j)
                    rewards[k][static_cast<std::size_t>(s) * n_actions +
                               a * rewards_replication + j] =
                        rhat[k][static_cast<std::size_t>(s) * A_base + a];
    Vec rho(S, 1.0 / static_cast<double>(S));
    TabularMdp model(S, n_actions, post.n_agents(), 0.99, kernel, std::move(rewards),
                     std::move(rho));
    SolveResult solved = solve_occupancy(model, f, solver);
    return extract_policy(solved.occupancy, solver.marginal_floor);
}

} // namespace

Vec sample_kernel(const DirichletPosterior& post, std::uint64_t rng_seed) {
    Rng rng(rng_seed);
    return sample_kernel_with(post, rng);
}

OpsConfig OpsConfig::standard(double delta, long horizon, int n_states, int n_actions) {
    if (delta <= 0.0 || delta > 1.0) throw DomainError("OpsConfig: delta in (0,1]");
    OpsConfig cfg;
    cfg.delta = delta;
    cfg.horizon = horizon;
    const double S = n_states, A = n_actions;
    cfg.psi = static_cast<int>(std::ceil(S * std::log(S * A / delta)));
    cfg.psi = std::max(cfg.psi, 1);
    cfg.omega = std::log(static_cast<double>(horizon) / delta);
    cfg.kappa = cfg.omega;
    cfg.optimism_threshold =
        std::sqrt(static_cast<double>(horizon) * S / A) + 12.0 * cfg.omega * S * S;
    return cfg;
}

ExtendedMdp build_extended_mdp(const DirichletPosterior& post, const OpsConfig& cfg,
                               std::uint64_t rng_seed) {
    Rng rng(rng_seed);
    return build_extended_with(post, cfg, rng);
}

void TrajectoryLog::write_csv(std::ostream& os) const {
    const int K = rows.empty() ? 0 : static_cast<int>(rows.front().rewards.size());
    os << "t,epoch,s,a";
    for (int k = 1; k <= K; ++k) os << ",r" << k;
    os << ",s_next\n";
    for (const TrajectoryRow& row : rows) {
        os << row.t << ',' << row.epoch << ',' << row.state << ',' << row.action;
        for (double r : row.rewards) os << ',' << r;
        os << ',' << row.next_state << '\n';
    }
}

LearningResult run_model_based(FiniteEnv& env, const ObjectiveFunction& f,
                               const EpochSchedule& schedule, const SolverConfig& solver,
                               long total_steps, std::uint64_t rng_seed) {
    Rng rng(rng_seed);
    const int S = env.n_states(), A = env.n_actions(), K = env.n_agents();
    DirichletPosterior post(S, A, K);
    TabularPolicy policy = TabularPolicy::uniform(S, A);
    TrajectoryLog log;
    log.rows.reserve(static_cast<std::size_t>(total_steps));

    Vec epoch_start_counts(static_cast<std::size_t>(S) * A);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a)
            epoch_start_counts[static_cast<std::size_t>(s) * A + a] = post.count_total(s, a);

    int state = env.reset(rng);
    int epoch = 0;
    Vec policy_row(A);
    for (long t = 0; t < total_steps; ++t) {
        for (int a = 0; a < A; ++a) policy_row[a] = policy.prob(state, a);
        const int action = rng.categorical(policy_row);
        FiniteStep step = env.step(action, rng);
        log.rows.push_back({t, epoch, state, action, step.rewards, step.next_state});
        post.record(state, action, step.rewards, step.next_state);

        bool boundary = false;
        if (schedule.kind == EpochSchedule::Kind::Fixed) {
            boundary = ((t + 1) % schedule.tau) == 0;
        } else {
            boundary = post.count_total(state, action) >=
                       2.0 * epoch_start_counts[static_cast<std::size_t>(state) * A + action];
        }
        state = step.next_state;
        if (boundary) {
            Vec kernel = sample_kernel_with(post, rng);
            policy = plan_policy(post, kernel, A, f, solver, 1);
            ++epoch;
            for (int s = 0; s < S; ++s)
                for (int a = 0; a < A; ++a)
                    epoch_start_counts[static_cast<std::size_t>(s) * A + a] =
                        post.count_total(s, a);
        }
    }
    return {std::move(policy), std::move(log)};
}

LearningResult run_ops(FiniteEnv& env, const ObjectiveFunction& f, const OpsConfig& cfg,
                       const SolverConfig& solver, std::uint64_t rng_seed) {
    Rng rng(rng_seed);
    const int S = env.n_states(), A = env.n_actions(), K = env.n_agents();
    DirichletPosterior post(S, A, K, cfg.omega);
    TabularPolicy ext_policy = TabularPolicy::uniform(S, A * cfg.psi);
    TrajectoryLog log;
    log.rows.reserve(static_cast<std::size_t>(cfg.horizon));

    Vec epoch_start_counts(static_cast<std::size_t>(S) * A);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a)
            epoch_start_counts[static_cast<std::size_t>(s) * A + a] = post.count_total(s, a);

    int state = env.reset(rng);
    int epoch = 0;
    Vec ext_row(static_cast<std::size_t>(A) * cfg.psi);
    for (long t = 0; t < cfg.horizon; ++t) {
        for (int e = 0; e < A * cfg.psi; ++e) ext_row[e] = ext_policy.prob(state, e);
        const int ext_action = rng.categorical(ext_row);
        const int action = ext_action / cfg.psi;
        FiniteStep step = env.step(action, rng);
        log.rows.push_back({t, epoch, state, action, step.rewards, step.next_state});
        post.record(state, action, step.rewards, step.next_state);
        post.rescale(cfg.omega, cfg.kappa);

        const bool boundary =
            post.count_total(state, action) >=
            2.0 * epoch_start_counts[static_cast<std::size_t>(state) * A + action];
        state = step.next_state;
        if (boundary) {
            ExtendedMdp ext = build_extended_with(post, cfg, rng);
            ext_policy = plan_policy(post, ext.kernels, A * cfg.psi, f, solver, cfg.psi);
            ++epoch;
            for (int s = 0; s < S; ++s)
                for (int a = 0; a < A; ++a)
                    epoch_start_counts[static_cast<std::size_t>(s) * A + a] =
                        post.count_total(s, a);
        }
    }

    // Marginalize the extended policy over sample indices for the caller.
    Vec base_probs(static_cast<std::size_t>(S) * A, 0.0);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a)
            for (int j = 0; j < cfg.psi; ++j)
                base_probs[static_cast<std::size_t>(s) * A + a] +=
                    ext_policy.prob(s, a * cfg.psi + j);
    return {TabularPolicy(S, A, std::move(base_probs)), std::move(log)};
}

} // namespace fairrl
