#pragma once

#include <stdexcept>

namespace convergo {

/// Malformed or out-of-contract input (bad spec, size cap, schema violation).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A cross-check failed that the underlying theory says cannot fail on valid
/// input. This flags a bug in the implementation, never in the mathematics.
class TheoremViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Spectral gaps fell inside the tolerance bands where no verdict can be
/// issued honestly at the configured precision.
class NumericalDegeneracy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace convergo
