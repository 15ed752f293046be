#pragma once

#include <stdexcept>
#include <string>

namespace brownian {

// Every failure raised by the library derives from one of the standard
// exception families so callers can catch broadly or precisely.

struct IndexError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when a dense-size guard would be exceeded.
struct SizeError : std::length_error {
    using std::length_error::length_error;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct RangeError : std::range_error {
    using std::range_error::range_error;
};

/// LAPACK failures and least-squares breakdowns.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A non-Hermitian spectrum lacks (or has too many) zero-decay modes.
struct DarkStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace brownian
