#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fairrl {

/// Deterministic random stream. All stochastic code in the library draws
/// through this class so that a fixed seed reproduces a run bit-for-bit.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return unit_(gen_); }

    /// Uniform integer in {0, ..., n-1}.
    int uniform_int(int n) {
        return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(gen_));
    }

    double normal() { return normal_(gen_); }

    /// Gamma(shape, 1) via Marsaglia-Tsang squeeze, with the usual
    /// U^{1/shape} boost for shape < 1.
    double gamma(double shape);

    /// Dirichlet draw with the given concentration parameters.
    /// Entries are floored to a tiny positive value and renormalized so the
    /// result is strictly positive.
    std::vector<double> dirichlet(const std::vector<double>& alpha);

    /// Index draw from an (unnormalized is not allowed) probability vector.
    int categorical(const std::vector<double>& probs);

    /// Derive an independent stream for worker `index` (splitmix64 mixing).
    Rng spawn(std::uint64_t index) const;

    std::mt19937_64& engine() { return gen_; }

  private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace fairrl
