#pragma once

#include <stdexcept>

namespace meanfield {

// Bad arguments or malformed input: wrong sizes, values outside their domain,
// unparseable config text. Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Config-file specific validation failure; carries line context in the message.
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A rate function misbehaved at runtime (negative or non-finite value).
// Maps to CLI exit code 2.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure: step-size underflow, simplex escape, singular solve,
// thinning bound violation. Maps to CLI exit code 2.
class NumericsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The frozen chain is not irreducible at the requested measure, so its
// stationary distribution is not usable as an equilibrium response.
class ReducibilityError : public NumericsError {
 public:
  using NumericsError::NumericsError;
};

}  // namespace meanfield
