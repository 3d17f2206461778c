#pragma once

#include <stdexcept>
#include <string>

namespace lubstep {

/// An argument lies outside the model's domain, e.g. a gap q <= 0.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A root-finder, quadrature or step controller failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The reference solver could not validate itself and refuses to act as ground truth.
class OracleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The requested operation is not available for this drag law or forcing kind.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A run would exceed its sample budget.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An output location cannot be created or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lubstep
