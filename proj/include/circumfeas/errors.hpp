#pragma once

#include <stdexcept>
#include <string>

namespace circumfeas {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed numerical input (non-finite entries, dimension mismatch, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration of a generator, solver or experiment.
class InvalidConfigError : public Error {
 public:
  using Error::Error;
};

/// Projection is not defined at the queried point (e.g. sphere center).
class UndefinedProjectionError : public Error {
 public:
  using Error::Error;
};

/// The circumcenter equidistance system has no solution (affinely
/// dependent, non-cocircular points). Carries the numerical rank of the
/// Gram matrix so callers can decide on a fallback.
class DegenerateConfigurationError : public Error {
 public:
  DegenerateConfigurationError(const std::string& what, int rank)
      : Error(what), rank_(rank) {}
  int rank() const noexcept { return rank_; }

 private:
  int rank_;
};

/// Requested stop criterion cannot be evaluated for the given sets.
class UnsupportedCriterionError : public Error {
 public:
  using Error::Error;
};

/// Affine sets have empty intersection; no best-approximation point exists.
class InfeasibleInstanceError : public Error {
 public:
  using Error::Error;
};

/// Not enough usable iterates to estimate a convergence rate.
class UndefinedRateError : public Error {
 public:
  using Error::Error;
};

/// Random instance generation failed to meet its contract after retries.
class GenerationFailureError : public Error {
 public:
  using Error::Error;
};

}  // namespace circumfeas
