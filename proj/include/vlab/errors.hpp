#pragma once

#include <stdexcept>
#include <string>

namespace vlab {

/// Bad user input: unknown catalog tag, malformed config, missing field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operation called outside its domain (window not covered, non-member data, ...).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical failure: non-finite value, divergence, no bracket found.
struct NumericsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace vlab
