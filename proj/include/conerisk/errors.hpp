#pragma once

#include <stdexcept>
#include <string>

namespace conerisk {

// Bad arguments: malformed set specs, dimension mismatches, violated
// preconditions. Maps to exit status 1.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A solver failed to converge or a matrix was singular. Maps to exit status 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Requested quantity has no implemented formula for this set family.
class Unsupported : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

}  // namespace conerisk
