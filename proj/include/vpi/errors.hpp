#pragma once

#include <stdexcept>
#include <string>

namespace vpi {

/// Invalid caller-supplied input: bad dimension, nonpositive mass, malformed file.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical stage failed (solver divergence, degenerate geometry, rejected fit).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A hypothesis of the volumetric inequality does not hold for the scenario.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vpi
