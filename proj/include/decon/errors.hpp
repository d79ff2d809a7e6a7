#pragma once

#include <stdexcept>
#include <string>

namespace decon {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or inconsistent input (dimension mismatch, bad matrix, ...).
class InputError : public Error {
public:
    using Error::Error;
};

/// Requested configuration is outside the supported envelope.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Operands are degenerate for the requested operation (e.g. F == H).
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// A numerical routine failed to converge within its pivot/iteration budget.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Sample sizes too small for the penalized estimator to say anything.
class EstimationError : public Error {
public:
    using Error::Error;
};

/// An iterative algorithm hit its iteration cap.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Input violates a structural assumption the algorithm relies on.
class AssumptionError : public Error {
public:
    using Error::Error;
};

/// Instance generator could not satisfy the requested constraints.
class GenerationError : public Error {
public:
    using Error::Error;
};

}  // namespace decon
