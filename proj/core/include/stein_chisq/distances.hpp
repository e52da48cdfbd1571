#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stein_chisq/statistics.hpp"
#include "stein_chisq/test_functions.hpp"

namespace stein_chisq {

enum class DistanceMode { exact, mc };
DistanceMode parse_distance_mode(const std::string& name);
std::string to_string(DistanceMode mode);

struct DistanceEstimate {
  double value = 0.0;
  double se = 0.0;  // 0 for exact
  DistanceMode mode = DistanceMode::exact;
  int n = 0;
  std::uint64_t seed = 0;
  std::size_t draws = 0;     // Monte Carlo draws, or enumerated outcomes
  double expectation = 0.0;  // E h(W) (smooth distances)
  double reference = 0.0;    // chi-square expectation (smooth distances)
};

/// A discrete law for W: sorted, tie-merged support points with masses.
struct WeightedAtoms {
  std::vector<double> x;
  std::vector<double> prob;
};
/// Sorts and merges ties (relative spacing below 1e-12).
WeightedAtoms merge_atoms(std::vector<std::pair<double, double>> atoms);

/// Exact law of Pearson's statistic by enumeration.
WeightedAtoms pearson_law(const MultinomialModel& model, double budget = 1e7);
/// Exact law of W_d; needs d = 1 or the Rademacher law.
WeightedAtoms squared_clt_law(IidLaw law, int n, int d, double budget = 1e7);

/// Draws of the statistics. Column sums are drawn exactly from the multinomial
/// counts over the law's atoms, so the cost does not grow with n.
std::vector<double> sample_pearson(const MultinomialModel& model, std::size_t draws, std::uint64_t seed);
std::vector<double> sample_squared_clt(IidLaw law, int n, int d, std::size_t draws, std::uint64_t seed);

/// |E h(W) - E h(Y)| for Y ~ chi-square(dof).
DistanceEstimate smooth_distance_from_law(const WeightedAtoms& law, const TestFunction& h, double dof);
DistanceEstimate smooth_distance_from_draws(const std::vector<double>& w, const TestFunction& h, double dof);

DistanceEstimate smooth_distance_pearson(const MultinomialModel& model, const TestFunction& h, DistanceMode mode,
                                         double budget, std::uint64_t seed);
DistanceEstimate smooth_distance_squared_clt(IidLaw law, int n, int d, const TestFunction& h, DistanceMode mode,
                                             double budget, std::uint64_t seed);

/// sup_z |F_W(z) - F_chi2(z)|, checking both one-sided limits at every atom.
double kolmogorov_from_atoms(const WeightedAtoms& law, double dof);
/// integral |F_W - F_chi2| over [0, inf).
double wasserstein_from_atoms(const WeightedAtoms& law, double dof);

/// Kolmogorov distance of Pearson's statistic from chi-square(m - 1). Monte
/// Carlo mode reports se = sqrt(ln 2 / (2 N)), the median of the DKW bound.
DistanceEstimate kolmogorov_distance(const MultinomialModel& model, DistanceMode mode, double budget,
                                     std::uint64_t seed);
DistanceEstimate wasserstein_distance(const MultinomialModel& model, DistanceMode mode, double budget,
                                      std::uint64_t seed);

struct AtomCheck {
  double exact;   // C(n, n/2) / 2^n
  double approx;  // sqrt(2 / (pi n))
  double ratio;
};
/// P(W = 0) for the d = 1 Rademacher statistic, against its Stirling form.
AtomCheck rademacher_atom_check(int n);

struct Slope {
  double slope;
  double se;
};
/// Least-squares slope of log distance against log n.
Slope rate_slope(const std::vector<std::pair<double, double>>& points);

}  // namespace stein_chisq
