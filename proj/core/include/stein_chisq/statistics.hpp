#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stein_chisq/constants.hpp"
#include "stein_chisq/rng.hpp"

namespace stein_chisq {

using Counts = std::vector<int>;

/// n trials over m cells with probabilities p.
class MultinomialModel {
 public:
  MultinomialModel(int n, std::vector<double> p);

  int n() const noexcept { return n_; }
  int m() const noexcept { return static_cast<int>(p_.size()); }
  const std::vector<double>& p() const noexcept { return p_; }
  double p_star() const noexcept { return p_star_; }
  /// n p_j >= 1 for every cell.
  bool every_cell_expected_at_least_one() const noexcept { return n_ * p_star_ >= 1.0; }

 private:
  int n_;
  std::vector<double> p_;
  double p_star_;
};

/// sum_j (U_j - n p_j)^2 / (n p_j).
double pearson_statistic(const MultinomialModel& model, const Counts& U);
/// S_j = (U_j - n p_j) / sqrt(n p_j).
std::vector<double> standardized_counts(const MultinomialModel& model, const Counts& U);

/// (1/n) sum_j (sum_i X_ij)^2 for an n x d matrix.
double squared_clt_statistic(const Eigen::MatrixXd& X);

/// C(n + m - 1, m - 1) as a double.
double outcome_count(int n, int m);

using OutcomeVisitor = std::function<void(const Counts& U, double log_probability)>;

/// Visits every composition of n into m cells once. Throws BudgetExceeded if
/// the number of outcomes exceeds `budget`.
void enumerate_multinomial(const MultinomialModel& model, const OutcomeVisitor& visit, double budget = 1e7);

Counts sample_multinomial(const MultinomialModel& model, Rng& rng);

/// Standardized (mean 0, variance 1) discrete laws for the squared-sum statistic.
enum class IidLaw { rademacher, uniform_discrete, shifted };
IidLaw parse_iid_law(const std::string& name);
std::string to_string(IidLaw law);

struct Atom {
  double x, prob;
};
/// Support and masses. `shifted` is the standardized Bernoulli(1/4).
std::vector<Atom> law_atoms(IidLaw law);

/// Absolute and raw moments of a standardized X.
struct MomentBundle {
  double abs3 = 1.0;
  double m4 = 1.0;
  double m6 = 1.0;
  double m8 = 1.0;
  double skew_abs = 0.0;

  /// Throws InvalidArgument unless 1 <= m4 <= m8 and abs3 >= 1.
  void validate() const;
};
MomentBundle law_moments(IidLaw law);

double sample_law(IidLaw law, Rng& rng);
Eigen::MatrixXd sample_iid_matrix(IidLaw law, int n, int d, Rng& rng);

/// E (S^(i))^2, E (S^(i))^4, E (S^(i))^6 where S^(i) = (B - n p)/sqrt(n p), B ~ Bin(n-1, p).
struct LooMoments {
  double m2, m4, m6;
};
LooMoments leave_one_out_moments(int n, double p);
/// Same moments by direct summation over the Bin(n-1, p) mass function.
LooMoments oracle_leave_one_out_moments(int n, double p);
/// E |S^(i) + shift|^q by direct summation.
double leave_one_out_abs_moment(int n, double p, double q, double shift = 0.0);

/// E (B - n p)^k for B ~ Bin(n, p), k = 1..6, closed form.
double binomial_central_moment(int n, double p, int order);
/// The same by summation over the mass function.
double binomial_central_moment_oracle(int n, double p, int order);

/// How theta_k in xi_k = S_k^(1) + theta_k I_k(1)/sqrt(n p_k) is chosen.
enum class ThetaMode { uniform, zero, half, one };

struct XiCheck {
  double estimate = 0.0;
  double se = 0.0;
  /// Exact value (for uniform theta, averaged over theta in closed form).
  double exact = 0.0;
  double cap = 0.0;  // c_q p_j
  bool hypothesis_ok = true;
};

/// E|I_j(1) xi_k^q| for q in {1, 2, 3, 4, 6}, j and k zero-based.
XiCheck indicator_xi_check(const MultinomialModel& model, int j, int k, int power, ThetaMode theta,
                           std::size_t mc_budget, std::uint64_t seed,
                           const BoundConstants& c = BoundConstants::defaults());

double xi_cap_constant(int power, const BoundConstants& c = BoundConstants::defaults());

}  // namespace stein_chisq
