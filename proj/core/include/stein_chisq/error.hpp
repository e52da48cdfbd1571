#pragma once

#include <stdexcept>
#include <string>

namespace stein_chisq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on user-supplied input was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature did not reach its tolerance within the interval budget.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double best_estimate, double error_estimate)
      : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

/// An enumeration or sampling budget was exhausted.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A bound formula needed a sup-norm that the bundle does not carry.
class MissingNorm : public Error {
 public:
  explicit MissingNorm(int order)
      : Error("missing sup-norm entry ||h^(" + std::to_string(order) + ")||"), order_(order) {}

  int order() const noexcept { return order_; }

 private:
  int order_;
};

/// A function returned NaN or infinity where a finite value was required.
class NonFiniteValue : public Error {
 public:
  explicit NonFiniteValue(double abscissa)
      : Error("non-finite function value at x = " + std::to_string(abscissa)), abscissa_(abscissa) {}

  double abscissa() const noexcept { return abscissa_; }

 private:
  double abscissa_;
};

}  // namespace stein_chisq
