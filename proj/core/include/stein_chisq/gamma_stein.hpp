#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "stein_chisq/constants.hpp"
#include "stein_chisq/numerics.hpp"
#include "stein_chisq/test_functions.hpp"

namespace stein_chisq {

/// Gamma law with shape r and rate lambda; chi-square(p) is (p/2, 1/2).
struct GammaParams {
  double r;
  double lambda;

  GammaParams(double shape, double rate);
  static GammaParams chi_square(double dof) { return {0.5 * dof, 0.5}; }

  double mean() const noexcept { return r / lambda; }
  double sd() const noexcept;
  bool is_chi_square() const noexcept { return lambda == 0.5; }
};

/// [0, r/lambda + 40 sqrt(r)/lambda]: where sup-norms of the solution are checked.
Interval verification_domain(const GammaParams& params);

/// E f(X) for X ~ Gamma(r, lambda). `knots` are points where f is not smooth.
double gamma_expectation(const RealFunction& f, const GammaParams& params, const std::vector<double>& knots = {},
                         double rel_tol = 1e-13);
double gamma_expectation(const TestFunction& h, const GammaParams& params, double rel_tol = 1e-13);

enum class Branch { automatic, lower, upper };

struct SolverOptions {
  double rel_tol = 1e-11;
  double abs_tol = 1e-14;
};

/// Derivatives f', ..., f^(K) of the solution of
///   x f''(x) + (r - lambda x) f'(x) = h(x) - E h(X).
///
/// Each f^(k) is a single integral, obtained by differentiating
///   f'(x) = int_0^1 s^(r-1) e^{lambda x (1-s)} (h - Eh)(xs) ds
/// (or minus the same integral over [1, inf) when x > r/lambda) k-1 times under
/// the integral sign. At x = 0 the exact limits are used instead.
class DerivativeTable {
 public:
  DerivativeTable(TestFunction h, GammaParams params, int max_order, SolverOptions opts = {});

  /// f^(k)(x) for 1 <= k <= max_order, x >= 0.
  double operator()(int k, double x) const { return derivative(k, x, Branch::automatic); }
  double derivative(int k, double x, Branch branch) const;
  /// f^(k)(0) from the zero-limit recurrence.
  double at_zero(int k) const;

  double gamma_mean_h() const noexcept { return gamma_mean_h_; }
  const GammaParams& params() const noexcept { return params_; }
  const TestFunction& h() const noexcept { return h_; }
  int max_order() const noexcept { return max_order_; }

  /// x f''(x) + (r - lambda x) f'(x) - (h(x) - E h).
  double stein_residual(double x) const;
  /// x f^(k+2) + (r + k - lambda x) f^(k+1) - k lambda f^(k) - h^(k), k >= 1.
  double recurrence_residual(int k, double x) const;

 private:
  double big_h(int j, double x) const;
  double lower_integral(int k, double x) const;
  double upper_integral(int k, double x) const;

  TestFunction h_;
  GammaParams params_;
  int max_order_;
  SolverOptions opts_;
  double gamma_mean_h_;
  std::vector<double> zero_values_;
  std::vector<std::vector<double>> binom_;
};

/// f'(x) alone.
double solve_first_derivative(const TestFunction& h, const GammaParams& params, double x);

/// Named upper bounds on ||f^(k)|| and ||x f^(k)||.
struct BoundCatalog {
  std::map<std::string, double> derivative;
  std::map<std::string, double> weighted;
  /// Bounds that could not be evaluated, with the reason.
  std::map<std::string, std::string> skipped;

  /// Smallest applicable value (infinity when none applies).
  double tightest_derivative() const;
  double tightest_weighted() const;
};

BoundCatalog bound_catalog(const GammaParams& params, int k, const NormBundle& norms,
                           const BoundConstants& c = BoundConstants::defaults());

/// Derivative provider used by residual checks: f^(k)(x) for k = 1, 2.
using DerivativeFn = std::function<double(int k, double x)>;

enum class ResidualMode { quadrature, monte_carlo };

/// E[X f''(X) + (r - lambda X) f'(X)], which vanishes for every admissible f.
/// For Monte Carlo mode the return is the sample mean of `budget` draws.
double characterization_residual(const DerivativeFn& f, const GammaParams& params, ResidualMode mode,
                                 std::size_t budget = 100000, std::uint64_t seed = 0);

}  // namespace stein_chisq
