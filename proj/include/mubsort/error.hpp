#pragma once

#include <stdexcept>
#include <string>

namespace mubsort {

/// Base class for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class UnsupportedDimension : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class EvanescentMode : public Error {
 public:
  using Error::Error;
};

class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

/// Configuration or spec values that violate a precondition.
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

/// Non-convergence, zero flux, non-finite intermediate values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace mubsort
