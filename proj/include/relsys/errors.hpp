#pragma once

#include <stdexcept>
#include <string>

namespace relsys {

// Invalid model data, malformed config, unknown ids, violated preconditions.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the mathematical domain of an operation (negative time, ...).
class DomainError : public ValidationError {
public:
    explicit DomainError(const std::string& what) : ValidationError(what) {}
};

// Quadrature failed to reach the requested tolerance. Carries the best
// estimate and the unresolved error bound.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const { return estimate_; }
    double error_bound() const { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

// Problem size exceeds a hard structural limit (path-set count).
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace relsys
