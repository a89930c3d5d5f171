#pragma once

#include <stdexcept>
#include <string>

namespace rqrcp {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not conform.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A documented precondition on a parameter (rank, block size, padding...) was violated.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// An iterative method hit its iteration cap or a factorization became degenerate.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace rqrcp
