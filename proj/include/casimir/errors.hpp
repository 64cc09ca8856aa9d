#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Query outside the range covered by tabulated data.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Operation not defined for the requested material model.
class UnsupportedModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Invalid user configuration or malformed input file.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Root bracket without a sign change.
class BracketError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Least-squares fit rejected because the data do not follow the model.
class FitError : public std::runtime_error {
public:
    FitError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Quadrature or Matsubara summation failed to reach the requested tolerance.
/// Carries the best estimate obtained so far.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double estimate, double error)
        : std::runtime_error(what), estimate_(estimate), error_(error) {}
    double estimate() const noexcept { return estimate_; }
    double error() const noexcept { return error_; }

private:
    double estimate_;
    double error_;
};

}  // namespace casimir
