#pragma once

#include <stdexcept>
#include <string>

namespace freemix {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Shape or block-structure mismatch (wrong dimensions, non-conforming operands).
class StructuralError : public Error {
public:
  using Error::Error;
};

/// Input outside the mathematical domain of an operation
/// (non-self-adjoint matrix passed to a PSD check, uncentered letter, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// A numerical routine failed to reach its accuracy contract.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Request exceeds a documented capacity limit (exact-mode size, index supply).
class CapacityError : public Error {
public:
  using Error::Error;
};

/// A stated hypothesis of the operation does not hold; the check is skipped.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// An operator failed Markov validation (unitality or complete positivity).
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Two independent routes to the same verdict disagree; flags a numerical
/// problem rather than a property of the input.
class DiagnosticError : public Error {
public:
  using Error::Error;
};

/// Malformed experiment configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace freemix
