#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "stein_chisq/constants.hpp"
#include "stein_chisq/gamma_stein.hpp"
#include "stein_chisq/rng.hpp"

namespace stein_chisq {

/// f^(k)(w) for a radial profile f of w = |s|^2.
using Profile = std::function<double(int k, double w)>;

/// Derivatives of a solved gamma Stein equation (k >= 1 only).
Profile profile_from_table(const DerivativeTable& table);
/// Piecewise Chebyshev interpolant of f^(k), k in [k_lo, k_hi], on [0, w_max]
/// (segments of length `segment`, `nodes` points each); exact quadrature
/// outside. For Monte Carlo and nested integrals where the table is hit at
/// millions of points. The table must outlive the profile.
Profile interpolated_profile(const DerivativeTable& table, int k_lo, int k_hi, double w_max, double segment = 2.0,
                             int nodes = 20);
/// f(w) = sum_i c_i w^i.
Profile polynomial_profile(std::vector<double> coeffs);

// ---------------------------------------------------------------- univariate

/// g(s) = f(s^2)/4 has g'''(s) = 3 s f''(s^2) + 2 s^3 f'''(s^2).
RealFunction g3_from_profile(Profile f);
/// g''''(s) = 3 f''(s^2) + 12 s^2 f'''(s^2) + 4 s^4 f''''(s^2).
RealFunction g4_from_profile(Profile f);

/// Solution of psi'(x) - x psi(x) = g3(x) for odd g3:
///   psi(x) = e^{x^2/2} int_{-inf}^x g3(s) e^{-s^2/2} ds,
/// evaluated on whichever side keeps the weight bounded.
double psi_univariate(const RealFunction& g3, double x, double rel_tol = 1e-12);

struct PsiValues {
  double psi, dpsi, d2psi;
};
/// psi, psi' = x psi + g3, psi'' = psi + x psi' + g4.
PsiValues psi_with_derivatives(const RealFunction& g3, const RealFunction& g4, double x);

struct PsiEnvelope {
  double psi, x_dpsi, d2psi;
};
/// Upper bounds on |psi(x)|, |x psi'(x)|, |psi''(x)| from ||f''||, ||f'''||, ||f''''||.
PsiEnvelope psi_envelope(double f2, double f3, double f4, double x,
                           const BoundConstants& c = BoundConstants::defaults());

// ---------------------------------------------------------------- multivariate

/// N(0, I - sqrt(p) sqrt(p)^T), supported on the hyperplane orthogonal to sqrt(p).
class ConstrainedGaussian {
 public:
  explicit ConstrainedGaussian(std::vector<double> p);

  int dim() const noexcept { return static_cast<int>(sqrt_p_.size()); }
  const std::vector<double>& p() const noexcept { return p_; }
  const Eigen::VectorXd& sqrt_p() const noexcept { return sqrt_p_; }
  const Eigen::MatrixXd& sigma() const noexcept { return sigma_; }

  /// v - (sqrt(p) . v) sqrt(p).
  Eigen::VectorXd project(const Eigen::VectorXd& v) const;
  Eigen::VectorXd sample(Rng& rng) const;
  /// count x m matrix; row i comes from chunk i / kChunkSize of `seed`.
  Eigen::MatrixXd sample(std::uint64_t seed, std::size_t count) const;

 private:
  std::vector<double> p_;
  Eigen::VectorXd sqrt_p_;
  Eigen::MatrixXd sigma_;
};

ConstrainedGaussian sigma_from_p(const std::vector<double>& p);

/// Partial derivative of g(s) = f(|s|^2)/4 over the listed indices (order 1..4).
double g_partial(const Profile& f, const Eigen::VectorXd& s, const std::vector<int>& idx);

/// grad^T Sigma grad g(s) - s^T grad g(s).
double mvn_operator_apply(const Profile& f, const ConstrainedGaussian& model, const Eigen::VectorXd& s);
/// w f''(w) + (m - 1 - w) f'(w) / 2.
double chisq_operator_apply(const Profile& f, int m, double w);

struct OperatorComparison {
  double mvn, chisq;
};
/// Both operators at s; s must satisfy sqrt(p) . s = 0 to 1e-12.
OperatorComparison operator_comparison(const Profile& f, const ConstrainedGaussian& model, const Eigen::VectorXd& s);

enum class HKind { h1, h2 };

/// d^3/(ds_a ds_b ds_c) of h1 = s_j f''(w) or h2 = s_j^3 f'''(w).
double h_third_partial(HKind which, const Profile& f, std::array<int, 3> abc, int j, const Eigen::VectorXd& s);

/// Envelope on the matching third partial of the MVN solution. `fnorms.at(k)`
/// is ||f^(k)||; k = 3..5 (h1) or 3..6 (h2) are read.
double third_partial_envelope(HKind which, const NormBundle& fnorms, const Eigen::VectorXd& s, std::array<int, 3> abc, int j,
                     const BoundConstants& c = BoundConstants::defaults());

struct Estimate {
  double value = 0.0;
  double se = 0.0;
  std::size_t draws = 0;
};

/// d^3 psi(s) = -int_0^1 t^2 E[d^3 h(t s + sqrt(1 - t^2) Z)] dt, Z ~ model.
/// Gauss-Legendre in t, the same Z draws at every node.
Estimate mvn_third_derivative_estimate(HKind which, const Profile& f, std::array<int, 3> abc, int j,
                                       const Eigen::VectorXd& s, const ConstrainedGaussian& model,
                                       std::size_t u_nodes, std::size_t mc_budget, std::uint64_t seed);

/// Weights of the t-rule above applied to (1 - t^2)^k, i.e. int_0^inf e^{-3u}(1 - e^{-2u})^k du.
double u_weight_moment(std::size_t u_nodes, int k);

}  // namespace stein_chisq
