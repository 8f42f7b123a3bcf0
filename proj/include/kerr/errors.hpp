#pragma once

#include <stdexcept>
#include <string>

namespace kerr {

/// The truncated Fock basis is too small for the requested state.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two states (or a state and an operator) live in different truncated spaces.
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A ladder/quadrature power would reach past the truncation edge.
class HeadroomError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kerr
