#pragma once

#include <stdexcept>
#include <string>

namespace fairrl {

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidAction : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NonErgodicChain : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InfeasibleProjection : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyBatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NonFiniteGradient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ObservationDimMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace fairrl
