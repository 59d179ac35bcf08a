#pragma once

#include <stdexcept>
#include <string>

namespace gyrochip {

// Base of every error raised by the library. Physics-domain failures (no
// guide, infeasible target) derive from DomainError so front ends can map
// them to a distinct exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularPointError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoGuideError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NonSmoothPotentialError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DomainMismatchError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

class DivergenceError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DegenerateOrientationError : public DomainError {
 public:
  using DomainError::DomainError;
};

class InvalidAveragingError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

class InfeasibleError : public DomainError {
 public:
  InfeasibleError(const std::string& what, double achieved_floor)
      : DomainError(what), achieved_floor_(achieved_floor) {}
  double achieved_floor() const noexcept { return achieved_floor_; }

 private:
  double achieved_floor_;
};

}  // namespace gyrochip
