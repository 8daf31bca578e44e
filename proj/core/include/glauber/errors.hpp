#pragma once

#include <stdexcept>

namespace glauber {

// An argument violates a documented precondition.
class InvalidParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A request exceeds a hard size limit (e.g. exact solver state space).
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical routine could not complete (bad bracket, non-monotone data, ...).
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace glauber
