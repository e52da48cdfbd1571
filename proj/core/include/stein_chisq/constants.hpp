#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace stein_chisq {

/// Every numeric constant that appears in a theorem bound. Bound calculators
/// read these through an explicit reference so a single entry can be perturbed
/// (the self-test uses this to show its checks are not vacuous).
struct BoundConstants {
  // Stein solution derivative bounds for the gamma target.
  double alt_lead = 2.5066282746310002 + 0.36787944117144233;  // sqrt(2 pi) + 1/e
  double alt_tail = 2.0;
  double new_prefactor = 2.0;
  double new_coef_prev = 3.0;
  double new_coef_prev2 = 2.0;
  double chisq_prefactor = 4.0;
  double xf2_coef = 4.0;
  double xfk2_coef = 4.0;
  double xfk1_coef = 4.0;
  double xfk1_shift = 2.0;

  // Squared sum statistic: alpha_k = a_k + b_k |E X^3|, prefactor 4 d/(d+2).
  double clt_prefactor = 4.0;
  double clt_a0 = 2.0, clt_b0 = 69.0;
  double clt_a1 = 38.0, clt_b1 = 654.0;
  double clt_a2 = 203.0, clt_b2 = 1781.0;
  double clt_a3 = 321.0, clt_b3 = 1320.0;

  // Pearson statistic, order 1/n.
  double pn1_prefactor = 4.0;
  double pn1_c0 = 19.0, pn1_c1 = 366.0, pn1_c2 = 2016.0;
  double pn1_c3 = 5264.0, pn1_c4 = 106965.0, pn1_c5 = 302922.0;
  // Pearson statistic, order 1/sqrt(n).
  double psq_prefactor = 12.0;
  double psq_c0 = 6.0, psq_c1 = 46.0, psq_c2 = 84.0;

  // Kolmogorov distance closed forms.
  double k2_c0 = 8.0, k2_c1 = 21.0, k2_c2 = 72.0;
  double k3_c0 = 19.0, k3_c1 = 44.0, k3_c2 = 72.0;
  double k4_c0 = 13.0, k4_c1 = 37.0, k4_c2 = 72.0;
  double k2_alpha = 52.75, k3_alpha = 25.27, k4_alpha = 30.58;

  // Earlier published Kolmogorov bounds.
  double lit_coef = 250.0;
  double lit_refined_coef = 400.0;

  // |psi|, |x psi'|, |psi''| envelopes for the univariate normal solution.
  double psi_env_psi_f2 = 3.0, psi_env_psi_f3 = 2.0, psi_env_psi_shift = 2.0;
  double psi_env_dpsi_f2 = 6.0, psi_env_dpsi_f3 = 4.0;
  double psi_env_d2psi_f2 = 6.0, psi_env_d2psi_f3 = 2.0, psi_env_d2psi_c = 8.0, psi_env_d2psi_f4 = 4.0;

  // Leave-one-out moment caps (np >= 1).
  double loo_m2_cap = 1.0, loo_m4_cap = 4.0, loo_m6_cap = 42.0;
  // E|I_j xi_k^q| <= c_q p_j for q = 1, 2, 3, 4, 6.
  double xi_c1 = 2.0, xi_c2 = 4.0, xi_c3 = 14.0, xi_c4 = 27.0, xi_c6 = 305.0;

  // Third-partial envelopes of h1 = s_j f''(w) and h2 = s_j^3 f'''(w).
  double mvn3_h1_f3 = 0.5, mvn3_h1_f4 = 0.8, mvn3_h1_f4c = 8.0, mvn3_h1_f4s = 3.0;
  double mvn3_h1_f5 = 16.0 / 35.0, mvn3_h1_f5c = 32.0, mvn3_h1_f5s = 5.0;
  double mvn3_h2_f3 = 0.5, mvn3_h2_f4 = 2.4, mvn3_h2_f4c = 4.0, mvn3_h2_f4j = 3.0;
  double mvn3_h2_f5 = 8.0 / 35.0, mvn3_h2_f5c = 384.0, mvn3_h2_f5s = 35.0, mvn3_h2_f5j = 135.0;
  double mvn3_h2_f6c = 4096.0 / 21.0, mvn3_h2_f6 = 128.0 / 27.0, mvn3_h2_f6j = 3.0;

  struct Entry {
    std::string_view name;
    double BoundConstants::*member;
    std::string_view note;
  };
  static const std::vector<Entry>& entries();

  /// Sets a constant by name; throws InvalidArgument for unknown names.
  void set(std::string_view name, double value);
  double get(std::string_view name) const;

  static const BoundConstants& defaults();
};

}  // namespace stein_chisq
