#pragma once

#include <stdexcept>
#include <string>

namespace erl {

/// Wrong matrix/vector shape or an odd phase-space dimension.
struct DimensionError : std::invalid_argument {
    explicit DimensionError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Inconsistent configuration (mismatched lambda, unknown kind, bad flag value).
struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A documented precondition was violated at runtime.
struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure (underflow, non-factorizable moments, singular recovery).
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace erl
