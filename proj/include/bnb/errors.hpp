#pragma once

#include <stdexcept>
#include <string>

namespace bnb {

// Malformed or inconsistent configuration (CLI exit code 1).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unreadable or inconsistent data files (CLI exit code 2).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact computation refused because the instance is too large (CLI exit code 3).
struct LimitsExceeded : std::runtime_error {
    LimitsExceeded(const std::string& what, double estimate)
        : std::runtime_error(what), estimated_work(estimate)
    {
    }
    double estimated_work;
};

// No hidden cell left for a (feature, label) pair.
struct ActionExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace bnb
