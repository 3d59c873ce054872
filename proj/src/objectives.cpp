#include "fairrl/objectives.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fairrl {

ObjectiveFunction ObjectiveFunction::alpha_fair(double alpha) {
    if (alpha <= 0.0) throw DomainError("alpha_fair: alpha must be positive");
    if (alpha == 1.0) return proportional_fair();
    ObjectiveFunction f(ObjectiveKind::AlphaFair, "alpha_fair");
    f.alpha_ = alpha;
    return f;
}

ObjectiveFunction ObjectiveFunction::proportional_fair() {
    return ObjectiveFunction(ObjectiveKind::ProportionalFair, "proportional_fair");
}

ObjectiveFunction ObjectiveFunction::weighted_proportional_fair(Vec weights) {
    double sum = 0.0;
    for (double w : weights) {
        if (w <= 0.0) throw DomainError("weighted_proportional_fair: weights must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw DomainError("weighted_proportional_fair: weights must sum to 1");
    ObjectiveFunction f(ObjectiveKind::WeightedProportionalFair, "weighted_proportional_fair");
    f.weights_ = std::move(weights);
    return f;
}

ObjectiveFunction ObjectiveFunction::max_min() {
    return ObjectiveFunction(ObjectiveKind::MaxMin, "max_min");
}

ObjectiveFunction ObjectiveFunction::neg_variance() {
    return ObjectiveFunction(ObjectiveKind::NegVariance, "neg_variance");
}

ObjectiveFunction ObjectiveFunction::identity() {
    return ObjectiveFunction(ObjectiveKind::Identity, "identity");
}

ObjectiveFunction ObjectiveFunction::custom(std::function<double(const Vec&)> eval,
                                            std::function<Vec(const Vec&)> grad,
                                            std::string name) {
    ObjectiveFunction f(ObjectiveKind::Custom, std::move(name));
    f.custom_eval_ = std::move(eval);
    f.custom_grad_ = std::move(grad);
    return f;
}

Vec ObjectiveFunction::floored(const Vec& x) const {
    Vec y = x;
    for (double& v : y) v = std::max(v, epsilon_floor);
    return y;
}

void ObjectiveFunction::check_dims(const Vec& x) const {
    if (x.empty()) throw DomainError("objective: empty input");
    if (kind_ == ObjectiveKind::WeightedProportionalFair && x.size() != weights_.size())
        throw DomainError("objective: weight vector length does not match input");
    if (kind_ == ObjectiveKind::Identity && x.size() != 1)
        throw DomainError("objective: identity expects a single component");
}

double ObjectiveFunction::evaluate(const Vec& x) const {
    check_dims(x);
    switch (kind_) {
    case ObjectiveKind::AlphaFair: {
        Vec y = floored(x);
        double total = 0.0;
        for (double v : y)
            total += (std::pow(v, 1.0 - alpha_) - 1.0) / (1.0 - alpha_);
        return total;
    }
    case ObjectiveKind::ProportionalFair: {
        Vec y = floored(x);
        double total = 0.0;
        for (double v : y) total += std::log(v);
        return total;
    }
    case ObjectiveKind::WeightedProportionalFair: {
        Vec y = floored(x);
        double total = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k) total += weights_[k] * std::log(y[k]);
        return total;
    }
    case ObjectiveKind::MaxMin:
        return *std::min_element(x.begin(), x.end());
    case ObjectiveKind::NegVariance: {
        const double n = static_cast<double>(x.size());
        const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
        double var = 0.0;
        for (double v : x) var += (v - mean) * (v - mean);
        return -var / n;
    }
    case ObjectiveKind::Identity:
        return x[0];
    case ObjectiveKind::Custom:
        return custom_eval_(x);
    }
    throw DomainError("objective: unknown kind");
}

Vec ObjectiveFunction::gradient(const Vec& x) const {
    check_dims(x);
    switch (kind_) {
    case ObjectiveKind::AlphaFair: {
        Vec y = floored(x);
        Vec g(y.size());
        for (std::size_t k = 0; k < y.size(); ++k) g[k] = std::pow(y[k], -alpha_);
        return g;
    }
    case ObjectiveKind::ProportionalFair: {
        Vec y = floored(x);
        Vec g(y.size());
        for (std::size_t k = 0; k < y.size(); ++k) g[k] = 1.0 / y[k];
        return g;
    }
    case ObjectiveKind::WeightedProportionalFair: {
        Vec y = floored(x);
        Vec g(y.size());
        for (std::size_t k = 0; k < y.size(); ++k) g[k] = weights_[k] / y[k];
        return g;
    }
    case ObjectiveKind::MaxMin: {
        // Subgradient: indicator of the lowest-index argmin.
        Vec g(x.size(), 0.0);
        std::size_t argmin = 0;
        for (std::size_t k = 1; k < x.size(); ++k)
            if (x[k] < x[argmin]) argmin = k;
        g[argmin] = 1.0;
        return g;
    }
    case ObjectiveKind::NegVariance: {
        const double n = static_cast<double>(x.size());
        const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
        Vec g(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) g[k] = -2.0 * (x[k] - mean) / n;
        return g;
    }
    case ObjectiveKind::Identity:
        return Vec{1.0};
    case ObjectiveKind::Custom:
        return custom_grad_(x);
    }
    throw DomainError("objective: unknown kind");
}

ObjectiveFunction ObjectiveFunction::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    const std::string kind = j.at("kind").get<std::string>();
    ObjectiveFunction f = [&]() {
        if (kind == "alpha_fair") return alpha_fair(j.at("alpha").get<double>());
        if (kind == "proportional_fair") return proportional_fair();
        if (kind == "weighted_proportional_fair")
            return weighted_proportional_fair(j.at("weights").get<Vec>());
        if (kind == "max_min") return max_min();
        if (kind == "neg_variance") return neg_variance();
        if (kind == "identity") return identity();
        throw ConfigError("objective: unknown kind '" + kind + "'");
    }();
    if (j.contains("epsilon_floor")) f.epsilon_floor = j.at("epsilon_floor").get<double>();
    if (j.contains("lipschitz")) f.lipschitz = j.at("lipschitz").get<double>();
    return f;
}

} // namespace fairrl
