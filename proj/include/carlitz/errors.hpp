#ifndef CARLITZ_ERRORS_HPP
#define CARLITZ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace carlitz {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad request: invalid parameters, malformed input strings, out-of-range sizes.
struct UsageError : Error {
    explicit UsageError(const std::string& msg) : Error(msg) {}
};

// Mathematically invalid operation: division by zero, domain violations,
// non-convergence at the requested precision.
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// A series operation would need more input precision than it was given.
struct PrecisionError : DomainError {
    PrecisionError(const std::string& msg, long long required_min)
        : DomainError(msg), required(required_min) {}
    long long required;
};

// An internal invariant failed; always a bug, never a user error.
struct InternalError : Error {
    explicit InternalError(const std::string& msg) : Error(msg) {}
};

}  // namespace carlitz

#endif
