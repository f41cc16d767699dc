#pragma once

#include <stdexcept>
#include <string>

namespace floatchain {

/// Base of all library errors. `context` is a short machine-readable hint
/// (offending field, matrix entry, index) carried to the CLI error JSON.
class Error : public std::runtime_error {
public:
    Error(const std::string& message, std::string context = {})
        : std::runtime_error(message), context_(std::move(context)) {}

    const std::string& context() const noexcept { return context_; }
    virtual const char* code() const noexcept { return "error"; }

private:
    std::string context_;
};

/// Invalid input: spec parameters, indices, labels, infeasible design targets.
class ValidationError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "validation_error"; }
};

/// Malformed file content (CSV / JSON).
class ParseError : public ValidationError {
public:
    using ValidationError::ValidationError;
    const char* code() const noexcept override { return "parse_error"; }
};

/// Requested design target outside the realizable region.
class InfeasibleTargetError : public ValidationError {
public:
    using ValidationError::ValidationError;
    const char* code() const noexcept override { return "infeasible_target"; }
};

/// Numerical failure: singular or indefinite matrices, truncation, unbracketed sweeps.
class NumericalError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "numerical_error"; }
};

class SingularMatrixError : public NumericalError {
public:
    using NumericalError::NumericalError;
    const char* code() const noexcept override { return "singular_matrix"; }
};

class FactorizationError : public NumericalError {
public:
    FactorizationError(const std::string& message, long pivot, std::string context = {})
        : NumericalError(message, std::move(context)), pivot_(pivot) {}

    long pivot() const noexcept { return pivot_; }
    const char* code() const noexcept override { return "factorization_error"; }

private:
    long pivot_;
};

class TruncationError : public NumericalError {
public:
    using NumericalError::NumericalError;
    const char* code() const noexcept override { return "truncation_error"; }
};

class BracketError : public NumericalError {
public:
    using NumericalError::NumericalError;
    const char* code() const noexcept override { return "unbracketed_resonance"; }
};

} // namespace floatchain
