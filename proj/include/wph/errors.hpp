#pragma once

#include <stdexcept>
#include <string>

namespace wph {

/// Base of every error raised by the library. The CLI maps these to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Point outside a chart's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Curve is not one of the model geodesics a chart supports.
class UnsupportedGeodesic : public Error {
 public:
  using Error::Error;
};

/// Malformed numerical input (non-uniform sampling, wrong sizes, bad JSON).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Integral or series that does not converge for the given data.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Linear problem too ill-conditioned to trust.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// Operation called outside its stated hypotheses.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

/// Not enough data for a least-squares fit.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Truncated integral whose tail estimate exceeds tolerance.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Grid too coarse for a stable finite-difference estimate.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

}  // namespace wph
