#pragma once

#include <stdexcept>
#include <string>

namespace tomo {

/// Invalid arguments, malformed files, or violated preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A query that falls outside the tabulated range of a grid.
class ExtrapolationError : public InputError {
 public:
  using InputError::InputError;
};

/// Quadrature or refinement failed to reach the requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The sampling resolution of a grid is too coarse for the requested query.
class ResolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace tomo
