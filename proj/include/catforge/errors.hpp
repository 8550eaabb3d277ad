#pragma once

#include <stdexcept>
#include <string>

namespace catforge {

// Base of every error raised by the library. The CLI maps subclasses onto
// exit codes, so new error kinds should derive from one of these.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller supplied parameters outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// A superposition whose weights cancel (norm below the degenerate threshold),
// or a cat state requested where the two components coalesce.
class DegenerateState : public DomainError {
public:
    using DomainError::DomainError;
};

// Conditioning on a measurement outcome of (numerically) zero probability.
class ZeroProbability : public DomainError {
public:
    using DomainError::DomainError;
};

class TruncationTooLarge : public DomainError {
public:
    using DomainError::DomainError;
};

class GridTooLarge : public DomainError {
public:
    using DomainError::DomainError;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// Internal consistency check failed (e.g. root finder disagrees with the
// closed form, density matrix has a genuinely negative eigenvalue).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace catforge
