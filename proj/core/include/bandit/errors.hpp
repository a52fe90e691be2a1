#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bandit {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A query that violates an operation precondition (e.g. support outside the
/// declared alphabet).
class InvalidQuery : public Error {
public:
    using Error::Error;
};

/// A constrained program with an empty feasible set at the requested level.
class InfeasibleQuery : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Instance-level degeneracy (tied means, zero information gap).
class DegenerateInstance : public Error {
public:
    using Error::Error;
};

/// Not enough data points to produce the requested estimate.
class InsufficientData : public Error {
public:
    using Error::Error;
};

/// Malformed input file or string.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Operational configuration problem (bad horizon, empty window, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Structural validation failure. Carries every issue found, not just the
/// first one.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> issues)
        : Error(join(issues)), issues_(std::move(issues)) {}
    explicit ValidationError(const std::string& issue)
        : ValidationError(std::vector<std::string>{issue}) {}

    const std::vector<std::string>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string out = "validation failed:";
        for (const auto& s : issues) {
            out += "\n  - ";
            out += s;
        }
        return out;
    }
    std::vector<std::string> issues_;
};

}  // namespace bandit
