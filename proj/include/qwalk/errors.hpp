#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Matrix or block shape does not match the spin it is attached to.
struct DimensionError : Error {
  using Error::Error;
};

// Argument outside the mathematical domain (q outside (0,1), index out of range).
struct DomainError : Error {
  using Error::Error;
};

// Numerical kernel of the raising/lowering operator is not one-dimensional.
struct DecompositionError : Error {
  using Error::Error;
};

struct UnsupportedElementError : Error {
  using Error::Error;
};

// A computation would need labels outside the caller's window.
struct WindowError : Error {
  using Error::Error;
};

// lambda >= 1: no geometric tail bound for the Green series.
struct NoCertificateError : Error {
  using Error::Error;
};

// Green mass of the divisor is below ten times its own tail bound.
struct IllConditionedError : Error {
  using Error::Error;
};

// Precondition of an experiment failed (non-transient or non-generating measure).
struct Refusal : Error {
  using Error::Error;
};

}  // namespace qwalk
