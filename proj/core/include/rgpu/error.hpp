#pragma once

#include <stdexcept>
#include <string>

namespace rgpu {

/// Invalid parameter or argument supplied by a caller (bad θ, τ out of range, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input data that fails validation: boundary values, malformed CSV, constant columns.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A broken internal invariant. Seeing one of these is a bug, not a user error.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace rgpu
