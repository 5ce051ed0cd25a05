#pragma once

#include <stdexcept>

namespace aebt {

// Bad user input: malformed data, out-of-range parameters, dimension
// mismatches. Maps to CLI exit code 2.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure on otherwise well-formed input: non-PD covariance,
// zero-variance column, and the like. Maps to CLI exit code 3.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace aebt
