#pragma once

#include "fairrl/env_interface.hpp"
#include "fairrl/objectives.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fairrl {

struct Trajectory {
    std::vector<Vec> observations; // T entries
    std::vector<int> actions;      // T entries
    std::vector<Vec> rewards;      // T entries, each K long
    std::size_t length() const { return actions.size(); }
};

/// Feedforward softmax policy: ReLU hidden layers, softmax output, manual
/// backpropagation. Parameters live in one flat array so optimizers can
/// treat the network as a single vector.
class MlpPolicy {
  public:
    MlpPolicy(int input_dim, std::vector<int> hidden_widths, int n_outputs, Rng& init_rng);

    int input_dim() const { return dims_.front(); }
    int n_outputs() const { return dims_.back(); }
    std::size_t n_params() const { return params_.size(); }

    const Vec& params() const { return params_; }
    void set_params(Vec params);

    /// Action probabilities (softmax output) for one observation.
    Vec forward(const Vec& obs) const;

    /// d log pi(action|obs) / d theta, flat, same layout as params().
    Vec grad_log_prob(const Vec& obs, int action) const;

    /// Accumulate scale * d log pi(action|obs) into each of the given flat
    /// buffers (one per agent, scaled by its own weight). Shared forward and
    /// backward pass; the hot path of the REINFORCE estimator.
    void accumulate_grad_log_prob(const Vec& obs, int action,
                                  const std::vector<double>& scales,
                                  std::vector<Vec>& sinks) const;

    std::string to_json() const;
    static MlpPolicy from_json(const std::string& text);

  private:
    MlpPolicy() = default;
    struct Workspace;
    void forward_into(const Vec& obs, Workspace& ws) const;

    std::vector<int> dims_; // input, hidden..., output
    Vec params_;            // [W0 row-major | b0 | W1 | b1 | ...]
};

struct PgConfig {
    int batch_size = 100;
    double learning_rate = 1e-3;
    double discount = 0.99;
    int horizon = 1000;
    int epochs = 1000;
    enum class Optimizer { Sgd, Adam } optimizer = Optimizer::Adam;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    std::vector<int> hidden_widths = {200};
};

std::vector<Trajectory> collect_trajectories(PgEnv& env, const MlpPolicy& policy,
                                             int n_trajectories, int horizon, Rng& rng);

struct GradEstimate {
    std::vector<Vec> per_agent; // K flat parameter gradients of J^k
    Vec avg_returns;            // J_hat^k = (1/N) sum_j sum_t gamma^t r^k
};

/// REINFORCE with discounted reward-to-go: grad J^k =
/// (1/N) sum_j sum_t grad log pi(a_t|s_t) * sum_{t'>=t} gamma^{t'} r^k_{t'}.
GradEstimate estimate_grad_J(const std::vector<Trajectory>& trajectories,
                             const MlpPolicy& policy, double gamma);

/// Chain rule through f at x = (1-gamma) * J_hat; the outer gradient picks up
/// an explicit (1-gamma) factor.
Vec joint_gradient(const ObjectiveFunction& f, const Vec& avg_returns,
                   const std::vector<Vec>& per_agent, double gamma);

struct TrainLogRow {
    int epoch = 0;
    double objective = 0.0; // f((1-gamma) J_hat)
    Vec returns;
    double grad_norm = 0.0;
};

struct TrainResult {
    MlpPolicy policy;
    std::vector<TrainLogRow> log;
};

/// Algorithm loop: collect -> estimate -> chain rule -> ascent step.
/// Throws NonFiniteGradient if an update would introduce NaN/inf.
TrainResult train(PgEnv& env, const ObjectiveFunction& f, const PgConfig& cfg,
                  std::uint64_t rng_seed);

} // namespace fairrl
