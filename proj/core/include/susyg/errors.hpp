#pragma once

#include <stdexcept>
#include <string>

namespace susyg {

// Domain errors: the request is invalid for the given configuration.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical errors: the request is valid but a numerical method failed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PoleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularTransform : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateLevel : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotNormalizable : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoSuchState : public DomainError {
 public:
  using DomainError::DomainError;
};

class InvalidAction : public DomainError {
 public:
  using DomainError::DomainError;
};

class ConsecutiveRoots : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotCyclic : public DomainError {
 public:
  using DomainError::DomainError;
};

class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace susyg
