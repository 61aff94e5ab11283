#pragma once

#include <stdexcept>
#include <string>

namespace snm {

// Common base so sweep runners can record a failed point and move on.
class SnmError : public std::runtime_error {
public:
    explicit SnmError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid user-facing configuration (bad grid, n too small, ...).
class ConfigError : public SnmError {
public:
    explicit ConfigError(const std::string& msg) : SnmError(msg) {}
};

// Argument outside the mathematical domain of an operation.
class DomainError : public SnmError {
public:
    explicit DomainError(const std::string& msg) : SnmError(msg) {}
};

// A requested quantity does not exist / is not finite for the family.
class CapabilityError : public SnmError {
public:
    explicit CapabilityError(const std::string& msg) : SnmError(msg) {}
};

// An integrand produced a non-finite value; carries the offending abscissa.
class EvaluationError : public SnmError {
public:
    EvaluationError(const std::string& msg, double where)
        : SnmError(msg + " at lambda=" + std::to_string(where)), where_(where) {}
    double where() const { return where_; }

private:
    double where_;
};

} // namespace snm
