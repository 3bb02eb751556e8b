#pragma once

#include <stdexcept>
#include <string>

namespace gielab {

/// Invalid configuration or malformed input. CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Fock-space population escaped past the truncation guard. CLI exit code 2.
class TruncationOverflow : public std::runtime_error {
public:
    explicit TruncationOverflow(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numerical guard tripped (norm drift, under-resolved quadrature, ...).
/// CLI exit code 3.
class NumericalGuardError : public std::runtime_error {
public:
    explicit NumericalGuardError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace gielab
