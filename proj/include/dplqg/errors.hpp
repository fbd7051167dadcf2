#pragma once

#include <stdexcept>
#include <string>

namespace dplqg {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Shape mismatch, non-square input, asymmetry, empty matrix.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Argument outside its mathematical domain (e.g. q_inverse outside (0, 0.5)).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Input fails a positive-(semi)definiteness requirement.
class DefinitenessError : public Error {
public:
    using Error::Error;
};

/// Singular or ill-conditioned linear system; carries the condition estimate.
class SingularityError : public Error {
public:
    SingularityError(const std::string& what, double condition_estimate)
        : Error(what), condition_estimate(condition_estimate) {}
    double condition_estimate;
};

/// Iteration failed to meet its tolerance; carries the final residual.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what), residual(residual) {}
    double residual;
};

/// A calibration or budget request that no parameter choice can satisfy.
class InfeasibilityError : public Error {
public:
    using Error::Error;
};

/// Scenario file cannot be parsed or fails validation.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure while reading or writing results.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace dplqg
