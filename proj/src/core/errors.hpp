#pragma once

#include <stdexcept>
#include <string>

namespace fuelstop {

// Invalid numeric input or malformed configuration.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Evaluation outside a function's mathematical domain.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Parameters or fuel level outside the regime this construction covers.
struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A solved object failed its own audit.
struct ValidationError : std::runtime_error {
    ValidationError(const std::string& msg, double where)
        : std::runtime_error(msg), location(where) {}
    double location;
};

// Iteration budget exhausted before reaching the requested tolerance.
struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& msg, double res)
        : std::runtime_error(msg), residual(res) {}
    double residual;
};

// Grid too coarse to resolve the feature of interest.
struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fuelstop
