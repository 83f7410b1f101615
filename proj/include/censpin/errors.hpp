// Error taxonomy shared by all censpin modules.
#pragma once

#include <stdexcept>
#include <string>

namespace censpin {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid argument or parameter combination (out-of-range site, N mismatch, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Operation asked for in a basis that cannot represent it.
class UnsupportedBasisError : public DomainError {
public:
    using DomainError::DomainError;
};

// Problem size exceeds a configured limit (dense eigensolver threshold, space caps).
class CapacityError : public Error {
public:
    using Error::Error;
};

// An iterative or series method failed to reach its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Finite-difference estimates disagree; carries a suggested retry step.
class FdStepError : public ConvergenceError {
public:
    FdStepError(const std::string& what, double suggested)
        : ConvergenceError(what), suggested_step_(suggested) {}
    double suggested_step() const { return suggested_step_; }

private:
    double suggested_step_;
};

// An internal cross-check failed (Hermiticity residue, imaginary expectation, ...).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

// Invalid run configuration (bad schema, unknown keys, missing fields).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace censpin
