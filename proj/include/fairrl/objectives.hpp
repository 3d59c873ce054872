#pragma once

#include "fairrl/errors.hpp"
#include "fairrl/mdp.hpp"

#include <functional>
#include <optional>
#include <string>

namespace fairrl {

enum class ObjectiveKind {
    AlphaFair,
    ProportionalFair,
    WeightedProportionalFair,
    MaxMin,
    NegVariance,
    Identity,
    Custom,
};

/// Concave scalarization over the per-agent average reward vector, with an
/// analytic gradient. Inputs are lifted to `epsilon_floor` before logs and
/// negative powers so that empty reward histories evaluate finitely.
class ObjectiveFunction {
  public:
    static ObjectiveFunction alpha_fair(double alpha);
    static ObjectiveFunction proportional_fair();
    static ObjectiveFunction weighted_proportional_fair(Vec weights);
    static ObjectiveFunction max_min();
    static ObjectiveFunction neg_variance();
    static ObjectiveFunction identity();
    static ObjectiveFunction custom(std::function<double(const Vec&)> eval,
                                    std::function<Vec(const Vec&)> grad,
                                    std::string name = "custom");

    double evaluate(const Vec& x) const;
    Vec gradient(const Vec& x) const;

    ObjectiveKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    double alpha() const { return alpha_; }
    const Vec& weights() const { return weights_; }

    double epsilon_floor = 1e-8;
    std::optional<double> lipschitz;

    /// Build from a config block: {"kind": "...", "alpha": ..., "weights": [...]}.
    static ObjectiveFunction from_json(const std::string& text);

  private:
    ObjectiveFunction(ObjectiveKind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

    Vec floored(const Vec& x) const;
    void check_dims(const Vec& x) const;

    ObjectiveKind kind_;
    std::string name_;
    double alpha_ = 0.0;
    Vec weights_;
    std::function<double(const Vec&)> custom_eval_;
    std::function<Vec(const Vec&)> custom_grad_;
};

} // namespace fairrl
