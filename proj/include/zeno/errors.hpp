// errors.hpp — exception types shared across the toolkit.

#pragma once

#include <stdexcept>
#include <string>

namespace zeno {

// Input/contract violations. The CLI maps these to exit code 1.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonFiniteEntry : ValidationError {
    using ValidationError::ValidationError;
};

struct NotPositiveSemidefinite : ValidationError {
    explicit NotPositiveSemidefinite(const std::string& msg, double eigenvalue)
        : ValidationError(msg), offending_eigenvalue(eigenvalue) {}
    double offending_eigenvalue;
};

struct VariantMismatch : ValidationError {
    using ValidationError::ValidationError;
};

struct StepTooLarge : ValidationError {
    using ValidationError::ValidationError;
};

struct ParseError : ValidationError {
    using ValidationError::ValidationError;
};

// Numeric failures that should be unreachable for validated inputs.
// The CLI maps these to exit code 2.
struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonConvergent : InternalError {
    using InternalError::InternalError;
};

struct FactorizationFailure : InternalError {
    using InternalError::InternalError;
};

struct ZeroProbabilityBranch : InternalError {
    using InternalError::InternalError;
};

}  // namespace zeno
