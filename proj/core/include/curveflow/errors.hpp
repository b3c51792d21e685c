#pragma once

#include <stdexcept>
#include <string>

namespace curveflow {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched field/mesh sizes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A polygonal curve (or one of its elements) has collapsed.
class DegenerateCurveError : public Error {
 public:
  using Error::Error;
};

/// Quadrature request beyond the supported exactness degree.
class UnsupportedDegreeError : public Error {
 public:
  using Error::Error;
};

/// Direct solver failure: structurally or numerically singular matrix.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, int pivot_index)
      : Error(what), pivot_index(pivot_index) {}
  /// Column of the failing pivot, -1 if not identifiable.
  int pivot_index = -1;
};

/// Fixed-point iteration exceeded its iteration budget.
class IterationFailureError : public Error {
 public:
  IterationFailureError(const std::string& what, double last_increment, int iterations)
      : Error(what), last_increment(last_increment), iterations(iterations) {}
  double last_increment = 0.0;
  int iterations = 0;
};

/// Invalid run configuration or CLI input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An operation was called on data it is not meant for.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace curveflow
