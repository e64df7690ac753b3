#pragma once

#include <stdexcept>
#include <string>

namespace fraclift {

// Bad input: malformed region, out-of-range parameter, dimension mismatch.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// The computation ran but its result cannot be trusted (degenerate
// geometry, missing spectral gap, non-watertight mesh, ...).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class TopologyError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

} // namespace fraclift
