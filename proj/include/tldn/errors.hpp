#pragma once

#include <stdexcept>
#include <string>

namespace tldn {

/// Base of every error raised by the library. `kind()` is a stable,
/// machine-readable class name (snake_case) used by the CLI on stderr.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Input / file level problems (CLI exit code 2).
class InputError : public Error {
public:
    using Error::Error;
};

// Structural validation (dimensions, symmetry, unitarity, passivity; exit 4).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Numerical failures inside synthesis and analysis (exit 3).
class NumericError : public Error {
public:
    using Error::Error;
};

class DimensionError : public ValidationError {
public:
    explicit DimensionError(const std::string& message)
        : ValidationError("dimension_error", message) {}
};

class SymmetryError : public ValidationError {
public:
    SymmetryError(const std::string& message, double max_asymmetry)
        : ValidationError("symmetry_error", message), max_asymmetry_(max_asymmetry) {}
    double max_asymmetry() const noexcept { return max_asymmetry_; }

private:
    double max_asymmetry_;
};

/// Raised by inverse/solve when the matrix is singular to working precision.
class SingularityError : public NumericError {
public:
    SingularityError(std::string kind, const std::string& message, double condition)
        : NumericError(std::move(kind), message), condition_(condition) {}
    explicit SingularityError(const std::string& message, double condition)
        : SingularityError("singular_matrix", message, condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

}  // namespace tldn
