#pragma once

#include <stdexcept>
#include <string>

namespace liemax {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments: dimension mismatch, non-invertible maps, dependent frames.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of an operation (log branch, t <= 0, non-compact Killing form).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A matrix that should lie in the image of the representation does not.
class RepresentationClosureError : public Error {
 public:
  using Error::Error;
};

/// Structure constants or representation failed a validation gate.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Case (b) operation called on a covector outside the generic set.
class GenericSetError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Unknown group, Hamiltonian or symmetry name.
class CatalogError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double last_good_time)
      : Error(what), last_good_time_(last_good_time) {}

  double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

}  // namespace liemax
