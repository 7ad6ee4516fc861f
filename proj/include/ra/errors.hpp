// Error taxonomy shared by all modules. Each error carries a short
// machine-readable code (printed by the CLI as "ERROR <code>: <message>")
// and an exit category: 1 input/validation, 2 numerical degeneracy,
// 3 internal invariant breach.
#pragma once

#include <stdexcept>
#include <string>

namespace ra {

enum class ErrorCategory : int {
    Input = 1,
    Degenerate = 2,
    Internal = 3,
};

class Error : public std::runtime_error {
public:
    Error(std::string code, ErrorCategory category, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)), category_(category) {}

    const std::string& code() const noexcept { return code_; }
    ErrorCategory category() const noexcept { return category_; }
    int exit_code() const noexcept { return static_cast<int>(category_); }

private:
    std::string code_;
    ErrorCategory category_;
};

// Input-side failures (exit code 1).
struct DomainError : Error {
    explicit DomainError(const std::string& m) : Error("DOMAIN", ErrorCategory::Input, m) {}
};
struct RangeError : Error {
    explicit RangeError(const std::string& m) : Error("RANGE", ErrorCategory::Input, m) {}
};
struct ValidationError : Error {
    explicit ValidationError(const std::string& m) : Error("VALIDATION", ErrorCategory::Input, m) {}
};
struct ParseError : Error {
    explicit ParseError(const std::string& m) : Error("PARSE", ErrorCategory::Input, m) {}
};
struct SchemaError : Error {
    explicit SchemaError(const std::string& m) : Error("SCHEMA", ErrorCategory::Input, m) {}
};
struct AlignmentError : Error {
    explicit AlignmentError(const std::string& m) : Error("ALIGNMENT", ErrorCategory::Input, m) {}
};
struct InsufficientData : Error {
    explicit InsufficientData(const std::string& m)
        : Error("INSUFFICIENT_DATA", ErrorCategory::Input, m) {}
};
struct IoError : Error {
    explicit IoError(const std::string& m) : Error("IO", ErrorCategory::Input, m) {}
};

// Numerical failures (exit code 2).
struct DegenerateError : Error {
    explicit DegenerateError(const std::string& m) : Error("DEGENERATE", ErrorCategory::Degenerate, m) {}
};
struct ConvergenceError : Error {
    explicit ConvergenceError(const std::string& m) : Error("CONVERGENCE", ErrorCategory::Degenerate, m) {}
};
struct NoInteriorOptimum : Error {
    explicit NoInteriorOptimum(const std::string& m)
        : Error("NO_INTERIOR_OPTIMUM", ErrorCategory::Degenerate, m) {}
};

// Broken internal invariants (exit code 3).
struct InternalError : Error {
    explicit InternalError(const std::string& m) : Error("INTERNAL", ErrorCategory::Internal, m) {}
};

}  // namespace ra
