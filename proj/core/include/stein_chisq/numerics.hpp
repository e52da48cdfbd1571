#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace stein_chisq {

using RealFunction = std::function<double(double)>;

/// [lo, hi] or [lo, +inf).
struct Interval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  static Interval half_line(double lo = 0.0) { return {lo, std::numeric_limits<double>::infinity()}; }
  static Interval finite(double lo, double hi);
  bool unbounded() const noexcept { return hi == std::numeric_limits<double>::infinity(); }
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  std::size_t max_intervals = 4000;
  /// Interior points where the integrand may be non-smooth or sharply peaked.
  std::vector<double> breakpoints;
  /// Length scale for the tail map x = a + L t/(1-t) on unbounded domains.
  double tail_scale = 1.0;
};

/// Globally adaptive Gauss-Kronrod (21 point) quadrature. The unbounded tail is
/// mapped onto [0, 1). Throws QuadratureError with the best estimate when the
/// interval budget runs out before the tolerance is met.
QuadratureResult integrate(const RealFunction& f, const Interval& domain, const QuadratureOptions& opts = {});

/// Shorthand: default options with the given relative tolerance.
QuadratureResult integrate_semiaxis(const RealFunction& f, const Interval& domain, double rel_tol);

/// Regularized lower incomplete gamma P(r, x).
double reg_lower_gamma(double r, double x);
/// Regularized upper incomplete gamma Q(r, x) = 1 - P(r, x), without cancellation.
double reg_upper_gamma(double r, double x);
/// CDF of the chi-square law with `dof` degrees of freedom (dof may be fractional).
double chi_square_cdf(double dof, double z);

struct SupNormOptions {
  std::size_t grid = 512;
  bool refine = true;
  /// Scale of the mapped grid used on unbounded domains.
  double scale = 1.0;
  /// Number of grid maxima to refine locally.
  std::size_t refine_candidates = 6;
};

/// Estimate of sup |f| over the domain. A grid maximum, optionally polished by
/// Brent search around the largest grid values; always a lower bound up to
/// round-off. Throws NonFiniteValue naming the abscissa.
double sup_norm_estimate(const RealFunction& f, const Interval& domain, const SupNormOptions& opts = {});
double sup_norm_estimate(const RealFunction& f, const Interval& domain, std::size_t grid, bool refine);

/// Abscissa of the maximum of |f| found by the same search.
std::pair<double, double> argmax_abs(const RealFunction& f, const Interval& domain, const SupNormOptions& opts = {});

/// Gauss-Legendre nodes and weights on [a, b] (Golub-Welsch).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

double log_factorial(double n);
double log_binomial(double n, double k);

/// Neumaier compensated summation.
class NeumaierSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }
  NeumaierSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Ordinary least squares y = a + b x. Returns {slope, standard error of slope}.
std::pair<double, double> ols_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace stein_chisq

namespace stein_chisq {

/// Throws InvalidArgument unless p has >= 2 strictly positive entries summing
/// to 1 within 1e-12.
void check_probability_vector(const std::vector<double>& p);

}  // namespace stein_chisq
