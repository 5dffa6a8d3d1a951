#pragma once

#include <stdexcept>
#include <string>

namespace tpg {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad inputs: malformed files, invalid parameters, unit mismatches. CLI exit 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class MissingAxisError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class OrderingViolationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateDataError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Physics-domain violations on otherwise well-formed inputs. CLI exit 3.
class DomainError : public Error {
 public:
  using Error::Error;
};

class OutOfWindowError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NonPositiveFrequencyError : public DomainError {
 public:
  using DomainError::DomainError;
};

class EnergyConservationError : public DomainError {
 public:
  using DomainError::DomainError;
};

class WindowCollapseError : public DomainError {
 public:
  using DomainError::DomainError;
};

class RegimeError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Solver found no sign change in its bracket. CLI exit 4.
class NoRootError : public Error {
 public:
  using Error::Error;
};

// Iterative procedure exhausted its budget. CLI exit 5.
class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

class StepTooCoarseError : public Error {
 public:
  using Error::Error;
};

}  // namespace tpg
