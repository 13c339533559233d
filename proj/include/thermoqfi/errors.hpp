#ifndef THERMOQFI_ERRORS_HPP
#define THERMOQFI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace thermoqfi {

// Base class for everything this library throws on precondition or
// invariant failure. The CLI maps these to exit code 2.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidDimensionError : Error {
    explicit InvalidDimensionError(const std::string& msg) : Error(msg) {}
};

struct DimensionMismatchError : Error {
    explicit DimensionMismatchError(const std::string& msg) : Error(msg) {}
};

// Raised when a truncated Fock space is too small for the requested state.
// Carries the smallest dimension that would satisfy the guard.
struct TruncationError : Error {
    TruncationError(const std::string& msg, int suggested)
        : Error(msg + " (suggested dim >= " + std::to_string(suggested) + ")"),
          suggested_dim(suggested) {}
    int suggested_dim;
};

// Raised when a phase-space grid does not cover the state.  Carries a
// half-extent that would.
struct GridCoverageError : Error {
    GridCoverageError(const std::string& msg, double suggested)
        : Error(msg + " (suggested half-extent >= " + std::to_string(suggested) + ")"),
          suggested_extent(suggested) {}
    double suggested_extent;
};

struct NonHermitianError : Error {
    explicit NonHermitianError(const std::string& msg) : Error(msg) {}
};

struct SingularStateError : Error {
    explicit SingularStateError(const std::string& msg) : Error(msg) {}
};

struct KernelDegenerateError : Error {
    explicit KernelDegenerateError(const std::string& msg) : Error(msg) {}
};

struct UnstableRegimeError : Error {
    explicit UnstableRegimeError(const std::string& msg) : Error(msg) {}
};

}  // namespace thermoqfi

#endif
