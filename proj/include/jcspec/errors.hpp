#pragma once

#include <stdexcept>
#include <string>

namespace jcspec {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was violated by its arguments.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Two operators or states built on different Hilbert spaces were combined.
class SpecMismatch : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// Parameters outside the range where the quasi-energy description holds
/// (2 eps / g >= 1).
class InvalidRegime : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// Run configuration rejected at load time.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Convergence, stationarity, tail or cross-check failure.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// More than one steady state; raised by the steady-state solver.
class DegenerateSteadyState : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Peak or eigenstate identification could not pick a unique candidate.
class AmbiguityError : public Error {
public:
    using Error::Error;
};

}  // namespace jcspec
