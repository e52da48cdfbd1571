#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "stein_chisq/constants.hpp"
#include "stein_chisq/statistics.hpp"
#include "stein_chisq/test_functions.hpp"

namespace stein_chisq {

struct BoundReport {
  std::string theorem;
  std::map<std::string, double> inputs;
  double value = 0.0;
  /// Hypotheses that do not hold; the value is still computed.
  std::vector<std::string> unsatisfied;

  bool hypotheses_ok() const noexcept { return unsatisfied.empty(); }
};

/// |E h(W_d) - chi2_(d) h| for W_d = (1/n) sum_k (sum_i X_ik)^2 with i.i.d.
/// standardized X: 4 d E X^8 / ((d + 2) n) * sum_k alpha_k ||h^(k)||, k = 0..3.
BoundReport bound_squared_clt(const NormBundle& norms, const MomentBundle& moments, int n, int d,
                              const BoundConstants& c = BoundConstants::defaults());
/// alpha_0..alpha_3 for a given |E X^3|.
std::vector<double> squared_clt_alphas(double skew_abs, const BoundConstants& c = BoundConstants::defaults());

enum class PearsonVariant { n1, sqrt, n1_pstar, sqrt_pstar };
PearsonVariant parse_pearson_variant(const std::string& name);
std::string to_string(PearsonVariant v);

/// sum_j p_j^(-1/2).
double sum_inv_sqrt(const std::vector<double>& p);

/// Smooth-function bounds for Pearson's statistic. n1 needs norms 0..5, sqrt
/// needs 0..2. np_j >= 1 is flagged when it fails.
BoundReport bound_pearson_smooth(const NormBundle& norms, const MultinomialModel& model, PearsonVariant variant,
                                 const BoundConstants& c = BoundConstants::defaults());

/// Closed-form Kolmogorov bound (three cases in m).
BoundReport bound_kolmogorov_pearson(const MultinomialModel& model,
                                     const BoundConstants& c = BoundConstants::defaults());
double kolmogorov_closed_form(int m, double t, const BoundConstants& c = BoundConstants::defaults());

struct LiteratureBounds {
  double original;  // 250 m / (p*^(3/2) sqrt(n))
  double refined;   // 400 m^(1/4) / (p*^(3/2) sqrt(n))
};
LiteratureBounds bound_literature(int n, const std::vector<double>& p,
                                  const BoundConstants& c = BoundConstants::defaults());

/// Extra Kolmogorov error from smoothing the indicator over width alpha:
/// sqrt(2 alpha/pi) (m = 2), alpha/2 (m = 3), alpha/(2 sqrt(pi (m-3))) (m >= 4).
double chi_square_density_term(int m, double alpha);
/// Smooth bound for h_alpha (norms 1, 2/alpha, 4/alpha^2) at t = n p*.
double smoothed_indicator_bound(double t, double alpha, const BoundConstants& c = BoundConstants::defaults());
/// smoothed_indicator_bound + chi_square_density_term.
double kolmogorov_objective(int m, double t, double alpha, const BoundConstants& c = BoundConstants::defaults());
/// The stated smoothing width for each case.
double stated_alpha(int m, double t, const BoundConstants& c = BoundConstants::defaults());

struct SmoothedBound {
  double alpha;
  double value;
};
/// Minimizes smooth_bound(alpha) + density(alpha) over the grid, then polishes
/// the best grid point with Brent's method (never returns worse than the grid).
SmoothedBound smooth_to_kolmogorov(const std::function<double(double)>& smooth_bound,
                                   const std::function<double(double)>& density, const std::vector<double>& alpha_grid);
/// Log-spaced grid around the stated alpha, including it.
std::vector<double> default_alpha_grid(int m, double t, const BoundConstants& c = BoundConstants::defaults());

}  // namespace stein_chisq
