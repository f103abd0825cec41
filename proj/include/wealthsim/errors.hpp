#pragma once

#include <stdexcept>
#include <string>

namespace wealthsim {

// Bad user input: config file keys/values, CLI arguments, invalid parameters.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Failure during a run: conservation breach, unreadable data file, etc.
struct SimulationError : std::runtime_error {
    explicit SimulationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A fit was requested on fewer usable points than the estimator needs.
struct InsufficientDataError : std::runtime_error {
    explicit InsufficientDataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace wealthsim
