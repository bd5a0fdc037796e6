#pragma once

#include <stdexcept>
#include <string>

namespace fjlim {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pivoting detected numerical singularity in a linear solve.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// The Sherman-Morrison denominator 1 + v'A^{-1}u vanished; the updated
/// matrix A + uv' is not invertible.
class DenominatorZero : public Error {
 public:
  using Error::Error;
};

/// An iterative solver exhausted its iteration budget.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

/// The nonzero pattern is not strongly connected.
class NotIrreducible : public Error {
 public:
  using Error::Error;
};

/// The operation requires a primitive matrix (graph period 1).
class NotPrimitive : public Error {
 public:
  using Error::Error;
};

/// A row's Euclidean norm exceeds the stated bound beta.
class RowNormExceeded : public Error {
 public:
  using Error::Error;
};

/// A non-Perron eigenvalue sits numerically on top of 1.
class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

/// The trajectory never entered (and stayed in) the settling band.
class NotSettled : public Error {
 public:
  using Error::Error;
};

/// Input violates one of the model assumptions; the message names it.
class AssumptionViolated : public Error {
 public:
  using Error::Error;
};

/// An instance file could not be parsed; the message carries coordinates.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A sigma_max grid was not strictly decreasing inside (0, 1).
class GridNotDecreasing : public Error {
 public:
  using Error::Error;
};

}  // namespace fjlim
