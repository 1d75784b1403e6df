#pragma once

#include <stdexcept>
#include <string>

namespace gimag {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Diagonal-block determinant of a covariance matrix was not positive.
class SingularityError : public Error {
 public:
  using Error::Error;
};

class PoleError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_estimate, double error_bound)
      : Error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

// A closed-form coefficient kept a non-negligible imaginary part.
class ClosedFormInconsistency : public Error {
 public:
  using Error::Error;
};

class IntegrationResolutionError : public Error {
 public:
  using Error::Error;
};

// Two independent evaluations of the same quantity disagreed.
class FormulaInconsistency : public Error {
 public:
  using Error::Error;
};

class SamplingError : public Error {
 public:
  using Error::Error;
};

}  // namespace gimag
