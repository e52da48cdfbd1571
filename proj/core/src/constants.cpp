#include "stein_chisq/constants.hpp"

#include "stein_chisq/error.hpp"

namespace stein_chisq {

const std::vector<BoundConstants::Entry>& BoundConstants::entries() {
  using B = BoundConstants;
  static const std::vector<Entry> table = {
      {"alt_lead", &B::alt_lead, "sqrt(2 pi) + 1/e over sqrt(r+k-1)"},
      {"alt_tail", &B::alt_tail, "2/(r+k-1)"},
      {"new_prefactor", &B::new_prefactor, "2/(r+k-1)"},
      {"new_coef_prev", &B::new_coef_prev, "3 ||h^(k-1)||"},
      {"new_coef_prev2", &B::new_coef_prev2, "2 lambda ||h^(k-2)||"},
      {"chisq_prefactor", &B::chisq_prefactor, "4/(p+2)"},
      {"xf2_coef", &B::xf2_coef, "||x f''|| <= 4||h||"},
      {"xfk2_coef", &B::xfk2_coef, "||x f^(k+2)|| <= 4||h^(k)||"},
      {"xfk1_coef", &B::xfk1_coef, "||x f^(k+1)|| <= (4/lambda)(2+sqrt(r+k))||h^(k)||"},
      {"xfk1_shift", &B::xfk1_shift, "2 + sqrt(r+k)"},
      {"clt_prefactor", &B::clt_prefactor, "4 d E X^8 / ((d+2) n)"},
      {"clt_a0", &B::clt_a0, "alpha_0"},
      {"clt_b0", &B::clt_b0, "alpha_0 skew"},
      {"clt_a1", &B::clt_a1, "alpha_1"},
      {"clt_b1", &B::clt_b1, "alpha_1 skew"},
      {"clt_a2", &B::clt_a2, "alpha_2"},
      {"clt_b2", &B::clt_b2, "alpha_2 skew"},
      {"clt_a3", &B::clt_a3, "alpha_3"},
      {"clt_b3", &B::clt_b3, "alpha_3 skew"},
      {"pn1_prefactor", &B::pn1_prefactor, "4/((m+1) n)"},
      {"pn1_c0", &B::pn1_c0, "||h||"},
      {"pn1_c1", &B::pn1_c1, "||h'||"},
      {"pn1_c2", &B::pn1_c2, "||h''||"},
      {"pn1_c3", &B::pn1_c3, "||h'''||"},
      {"pn1_c4", &B::pn1_c4, "||h^(4)||"},
      {"pn1_c5", &B::pn1_c5, "||h^(5)||"},
      {"psq_prefactor", &B::psq_prefactor, "12/((m+1) sqrt(n))"},
      {"psq_c0", &B::psq_c0, "||h||"},
      {"psq_c1", &B::psq_c1, "||h'||"},
      {"psq_c2", &B::psq_c2, "||h''||"},
      {"k2_c0", &B::k2_c0, "m = 2"},
      {"k2_c1", &B::k2_c1, "m = 2"},
      {"k2_c2", &B::k2_c2, "m = 2"},
      {"k3_c0", &B::k3_c0, "m = 3"},
      {"k3_c1", &B::k3_c1, "m = 3"},
      {"k3_c2", &B::k3_c2, "m = 3"},
      {"k4_c0", &B::k4_c0, "m >= 4"},
      {"k4_c1", &B::k4_c1, "m >= 4"},
      {"k4_c2", &B::k4_c2, "m >= 4"},
      {"k2_alpha", &B::k2_alpha, "alpha = 52.75 t^(-1/5)"},
      {"k3_alpha", &B::k3_alpha, "alpha = 25.27 t^(-1/6)"},
      {"k4_alpha", &B::k4_alpha, "alpha = 30.58 (m-3)^(1/6) t^(-1/6)"},
      {"lit_coef", &B::lit_coef, "250 m p*^(-3/2) n^(-1/2)"},
      {"lit_refined_coef", &B::lit_refined_coef, "400 m^(1/4) p*^(-3/2) n^(-1/2)"},
      {"psi_env_psi_f2", &B::psi_env_psi_f2, "|psi|"},
      {"psi_env_psi_f3", &B::psi_env_psi_f3, "|psi|"},
      {"psi_env_psi_shift", &B::psi_env_psi_shift, "|psi|: x^2 + 2"},
      {"psi_env_dpsi_f2", &B::psi_env_dpsi_f2, "|x psi'|"},
      {"psi_env_dpsi_f3", &B::psi_env_dpsi_f3, "|x psi'|"},
      {"psi_env_d2psi_f2", &B::psi_env_d2psi_f2, "|psi''|"},
      {"psi_env_d2psi_f3", &B::psi_env_d2psi_f3, "|psi''|"},
      {"psi_env_d2psi_c", &B::psi_env_d2psi_c, "|psi''|: 2x^4 + 3x^2 + 8"},
      {"psi_env_d2psi_f4", &B::psi_env_d2psi_f4, "|psi''|"},
      {"loo_m2_cap", &B::loo_m2_cap, "E S^2 cap"},
      {"loo_m4_cap", &B::loo_m4_cap, "E S^4 cap"},
      {"loo_m6_cap", &B::loo_m6_cap, "E S^6 cap"},
      {"xi_c1", &B::xi_c1, "E|I xi|"},
      {"xi_c2", &B::xi_c2, "E|I xi^2|"},
      {"xi_c3", &B::xi_c3, "E|I xi^3|"},
      {"xi_c4", &B::xi_c4, "E|I xi^4|"},
      {"xi_c6", &B::xi_c6, "E|I xi^6|"},
      {"mvn3_h1_f3", &B::mvn3_h1_f3, "h1"},
      {"mvn3_h1_f4", &B::mvn3_h1_f4, "h1"},
      {"mvn3_h1_f4c", &B::mvn3_h1_f4c, "h1"},
      {"mvn3_h1_f4s", &B::mvn3_h1_f4s, "h1"},
      {"mvn3_h1_f5", &B::mvn3_h1_f5, "h1"},
      {"mvn3_h1_f5c", &B::mvn3_h1_f5c, "h1"},
      {"mvn3_h1_f5s", &B::mvn3_h1_f5s, "h1"},
      {"mvn3_h2_f3", &B::mvn3_h2_f3, "h2"},
      {"mvn3_h2_f4", &B::mvn3_h2_f4, "h2"},
      {"mvn3_h2_f4c", &B::mvn3_h2_f4c, "h2"},
      {"mvn3_h2_f4j", &B::mvn3_h2_f4j, "h2"},
      {"mvn3_h2_f5", &B::mvn3_h2_f5, "h2"},
      {"mvn3_h2_f5c", &B::mvn3_h2_f5c, "h2"},
      {"mvn3_h2_f5s", &B::mvn3_h2_f5s, "h2: 5 * 7 s^4"},
      {"mvn3_h2_f5j", &B::mvn3_h2_f5j, "h2: 5 * 27 s_j^4"},
      {"mvn3_h2_f6c", &B::mvn3_h2_f6c, "h2: 4096/21"},
      {"mvn3_h2_f6", &B::mvn3_h2_f6, "h2: 128/27"},
      {"mvn3_h2_f6j", &B::mvn3_h2_f6j, "h2"},
  };
  return table;
}

void BoundConstants::set(std::string_view name, double value) {
  for (const auto& e : entries())
    if (e.name == name) {
      this->*e.member = value;
      return;
    }
  throw InvalidArgument("unknown constant '" + std::string(name) + "'");
}

double BoundConstants::get(std::string_view name) const {
  for (const auto& e : entries())
    if (e.name == name) return this->*e.member;
  throw InvalidArgument("unknown constant '" + std::string(name) + "'");
}

const BoundConstants& BoundConstants::defaults() {
  static const BoundConstants c{};
  return c;
}

}  // namespace stein_chisq
