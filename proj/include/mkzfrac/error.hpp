#pragma once

#include <stdexcept>
#include <string>

namespace mkzfrac {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument or input violated a documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A series did not reach its mass target before the term cap.
class TruncationError : public Error {
public:
    using Error::Error;
};

/// The scaling data does not define a contraction (sup norm or L^p factor >= 1).
class NonContractionError : public Error {
public:
    using Error::Error;
};

/// The fixed-point iteration hit its cap with the residual still above tolerance.
class NonConvergenceError : public Error {
public:
    using Error::Error;
};

/// A bound formula has a vanishing denominator.
class DegenerateError : public Error {
public:
    using Error::Error;
};

}  // namespace mkzfrac
