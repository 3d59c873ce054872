#include "fairrl/policy_gradient.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstddef>

namespace fairrl {

struct MlpPolicy::Workspace {
    std::vector<Vec> acts; // acts[0] = input, acts.back() = softmax output
    Vec delta;
    Vec delta_prev;
};

MlpPolicy::MlpPolicy(int input_dim, std::vector<int> hidden_widths, int n_outputs,
                     Rng& init_rng) {
    if (input_dim < 1 || n_outputs < 1)
        throw DomainError("MlpPolicy: dimensions must be positive");
    dims_.push_back(input_dim);
    for (int w : hidden_widths) {
        if (w < 1) throw DomainError("MlpPolicy: hidden width must be positive");
        dims_.push_back(w);
    }
    dims_.push_back(n_outputs);

    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l)
        total += static_cast<std::size_t>(dims_[l + 1]) * dims_[l] + dims_[l + 1];
    params_.assign(total, 0.0);

    // Glorot-uniform weights, zero biases.
    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
        const int fan_in = dims_[l], fan_out = dims_[l + 1];
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        for (int i = 0; i < fan_out * fan_in; ++i)
            params_[offset + i] = (2.0 * init_rng.uniform() - 1.0) * bound;
        offset += static_cast<std::size_t>(fan_out) * fan_in + fan_out;
    }
}

void MlpPolicy::set_params(Vec params) {
    if (params.size() != params_.size())
        throw DimensionMismatch("MlpPolicy: parameter vector size mismatch");
    params_ = std::move(params);
}

void MlpPolicy::forward_into(const Vec& obs, Workspace& ws) const {
    if (static_cast<int>(obs.size()) != dims_.front())
        throw ObservationDimMismatch("MlpPolicy: observation dimension mismatch");
    const std::size_t n_layers = dims_.size() - 1;
    ws.acts.resize(n_layers + 1);
    ws.acts[0] = obs;
    std::size_t offset = 0;
    for (std::size_t l = 0; l < n_layers; ++l) {
        const int in = dims_[l], out = dims_[l + 1];
        Vec& y = ws.acts[l + 1];
        y.assign(out, 0.0);
        const double* W = params_.data() + offset;
        const double* b = W + static_cast<std::size_t>(out) * in;
        const Vec& x = ws.acts[l];
        for (int i = 0; i < out; ++i) {
            double z = b[i];
            const double* w_row = W + static_cast<std::size_t>(i) * in;
            for (int j = 0; j < in; ++j) z += w_row[j] * x[j];
            y[i] = z;
        }
        if (l + 1 < n_layers) {
            for (double& v : y) v = v > 0.0 ? v : 0.0; // ReLU
        } else {
            double zmax = y[0];
            for (double v : y) zmax = std::max(zmax, v);
            double total = 0.0;
            for (double& v : y) {
                v = std::exp(v - zmax);
                total += v;
            }
            for (double& v : y) v /= total;
        }
        offset += static_cast<std::size_t>(out) * in + out;
    }
}

Vec MlpPolicy::forward(const Vec& obs) const {
    thread_local Workspace ws;
    forward_into(obs, ws);
    return ws.acts.back();
}

void MlpPolicy::accumulate_grad_log_prob(const Vec& obs, int action,
                                         const std::vector<double>& scales,
                                         std::vector<Vec>& sinks) const {
    if (action < 0 || action >= dims_.back())
        throw InvalidAction("MlpPolicy: action index out of range");
    thread_local Workspace ws;
    thread_local Vec grad;
    forward_into(obs, ws);
    grad.assign(params_.size(), 0.0);

    const std::size_t n_layers = dims_.size() - 1;
    // d log p(a) / d z_out = e_a - p
    ws.delta = ws.acts.back();
    for (double& v : ws.delta) v = -v;
    ws.delta[action] += 1.0;

    // Walk layers backwards; offsets recomputed per layer.
    std::vector<std::size_t> offsets(n_layers);
    std::size_t offset = 0;
    for (std::size_t l = 0; l < n_layers; ++l) {
        offsets[l] = offset;
        offset += static_cast<std::size_t>(dims_[l + 1]) * dims_[l] + dims_[l + 1];
    }
    for (std::size_t l = n_layers; l-- > 0;) {
        const int in = dims_[l], out = dims_[l + 1];
        const double* W = params_.data() + offsets[l];
        double* gW = grad.data() + offsets[l];
        double* gb = gW + static_cast<std::size_t>(out) * in;
        const Vec& x = ws.acts[l];
        for (int i = 0; i < out; ++i) {
            const double d = ws.delta[i];
            gb[i] = d;
            double* g_row = gW + static_cast<std::size_t>(i) * in;
            for (int j = 0; j < in; ++j) g_row[j] = d * x[j];
        }
        if (l > 0) {
            ws.delta_prev.assign(in, 0.0);
            for (int i = 0; i < out; ++i) {
                const double d = ws.delta[i];
                const double* w_row = W + static_cast<std::size_t>(i) * in;
                for (int j = 0; j < in; ++j) ws.delta_prev[j] += d * w_row[j];
            }
            for (int j = 0; j < in; ++j)
                if (x[j] <= 0.0) ws.delta_prev[j] = 0.0; // ReLU mask
            std::swap(ws.delta, ws.delta_prev);
        }
    }

    for (std::size_t k = 0; k < sinks.size(); ++k) {
        const double s = scales[k];
        if (s == 0.0) continue;
        double* out_k = sinks[k].data();
        for (std::size_t i = 0; i < grad.size(); ++i) out_k[i] += s * grad[i];
    }
}

Vec MlpPolicy::grad_log_prob(const Vec& obs, int action) const {
    std::vector<Vec> sinks(1, Vec(params_.size(), 0.0));
    accumulate_grad_log_prob(obs, action, {1.0}, sinks);
    return std::move(sinks[0]);
}

std::string MlpPolicy::to_json() const {
    nlohmann::json j;
    j["dims"] = dims_;
    j["params"] = params_;
    return j.dump();
}

MlpPolicy MlpPolicy::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    MlpPolicy policy;
    policy.dims_ = j.at("dims").get<std::vector<int>>();
    policy.params_ = j.at("params").get<Vec>();
    std::size_t expected = 0;
    for (std::size_t l = 0; l + 1 < policy.dims_.size(); ++l)
        expected += static_cast<std::size_t>(policy.dims_[l + 1]) * policy.dims_[l] +
                    policy.dims_[l + 1];
    if (policy.params_.size() != expected)
        throw DimensionMismatch("MlpPolicy: checkpoint parameter count mismatch");
    return policy;
}

std::vector<Trajectory> collect_trajectories(PgEnv& env, const MlpPolicy& policy,
                                             int n_trajectories, int horizon, Rng& rng) {
    if (env.obs_dim() != policy.input_dim())
        throw ObservationDimMismatch("collect_trajectories: env/policy dimension mismatch");
    std::vector<Trajectory> out;
    out.reserve(std::max(n_trajectories, 0));
    for (int j = 0; j < n_trajectories; ++j) {
        Trajectory traj;
        traj.observations.reserve(horizon);
        traj.actions.reserve(horizon);
        traj.rewards.reserve(horizon);
        Vec obs = env.reset(rng);
        for (int t = 0; t < horizon; ++t) {
            Vec probs = policy.forward(obs);
            int action = rng.categorical(probs);
            PgStep step = env.step(action, rng);
            traj.observations.push_back(std::move(obs));
            traj.actions.push_back(action);
            traj.rewards.push_back(std::move(step.rewards));
            obs = std::move(step.observation);
        }
        out.push_back(std::move(traj));
    }
    return out;
}

GradEstimate estimate_grad_J(const std::vector<Trajectory>& trajectories,
                             const MlpPolicy& policy, double gamma) {
    if (trajectories.empty()) throw EmptyBatch("estimate_grad_J: empty batch");
    const int K = static_cast<int>(trajectories.front().rewards.front().size());
    const double n = static_cast<double>(trajectories.size());

    GradEstimate est;
    est.per_agent.assign(K, Vec(policy.n_params(), 0.0));
    est.avg_returns.assign(K, 0.0);

    std::vector<Vec> togo; // per-agent discounted reward-to-go, gamma^t from start
    std::vector<double> scales(K);
    for (const Trajectory& traj : trajectories) {
        const std::size_t T = traj.length();
        togo.assign(K, Vec(T + 1, 0.0));
        for (int k = 0; k < K; ++k) {
            double discount = std::pow(gamma, static_cast<double>(T - 1));
            for (std::size_t t = T; t-- > 0;) {
                togo[k][t] = togo[k][t + 1] + discount * traj.rewards[t][k];
                discount /= gamma;
            }
            est.avg_returns[k] += togo[k][0] / n;
        }
        for (std::size_t t = 0; t < T; ++t) {
            for (int k = 0; k < K; ++k) scales[k] = togo[k][t] / n;
            policy.accumulate_grad_log_prob(traj.observations[t], traj.actions[t],
                                            scales, est.per_agent);
        }
    }
    return est;
}

Vec joint_gradient(const ObjectiveFunction& f, const Vec& avg_returns,
                   const std::vector<Vec>& per_agent, double gamma) {
    if (avg_returns.size() != per_agent.size())
        throw DimensionMismatch("joint_gradient: return/gradient stack size mismatch");
    Vec x(avg_returns.size());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = (1.0 - gamma) * avg_returns[k];
    Vec outer = f.gradient(x);
    Vec grad(per_agent.front().size(), 0.0);
    for (std::size_t k = 0; k < per_agent.size(); ++k) {
        const double w = (1.0 - gamma) * outer[k];
        if (w == 0.0) continue;
        if (per_agent[k].size() != grad.size())
            throw DimensionMismatch("joint_gradient: ragged gradient stack");
        for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += w * per_agent[k][i];
    }
    return grad;
}

TrainResult train(PgEnv& env, const ObjectiveFunction& f, const PgConfig& cfg,
                  std::uint64_t rng_seed) {
    Rng rng(rng_seed);
    MlpPolicy policy(env.obs_dim(), cfg.hidden_widths, env.n_actions(), rng);

    Vec m(policy.n_params(), 0.0), v(policy.n_params(), 0.0);
    std::vector<TrainLogRow> log;
    log.reserve(cfg.epochs);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        auto trajs = collect_trajectories(env, policy, cfg.batch_size, cfg.horizon, rng);
        GradEstimate est = estimate_grad_J(trajs, policy, cfg.discount);
        Vec grad = joint_gradient(f, est.avg_returns, est.per_agent, cfg.discount);

        double norm_sq = 0.0;
        for (double g : grad) norm_sq += g * g;
        if (!std::isfinite(norm_sq))
            throw NonFiniteGradient("train: non-finite gradient at epoch " +
                                    std::to_string(epoch));

        Vec params = policy.params();
        if (cfg.optimizer == PgConfig::Optimizer::Adam) {
            const double t = static_cast<double>(epoch + 1);
            const double bc1 = 1.0 - std::pow(cfg.adam_beta1, t);
            const double bc2 = 1.0 - std::pow(cfg.adam_beta2, t);
            for (std::size_t i = 0; i < params.size(); ++i) {
                m[i] = cfg.adam_beta1 * m[i] + (1.0 - cfg.adam_beta1) * grad[i];
                v[i] = cfg.adam_beta2 * v[i] + (1.0 - cfg.adam_beta2) * grad[i] * grad[i];
                params[i] += cfg.learning_rate * (m[i] / bc1) /
                             (std::sqrt(v[i] / bc2) + cfg.adam_eps);
            }
        } else {
            for (std::size_t i = 0; i < params.size(); ++i)
                params[i] += cfg.learning_rate * grad[i];
        }
        policy.set_params(std::move(params));

        Vec x(est.avg_returns.size());
        for (std::size_t k = 0; k < x.size(); ++k)
            x[k] = (1.0 - cfg.discount) * est.avg_returns[k];
        log.push_back({epoch, f.evaluate(x), est.avg_returns, std::sqrt(norm_sq)});
    }
    return {std::move(policy), std::move(log)};
}

} // namespace fairrl
