#include "stein_chisq/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "stein_chisq/error.hpp"
#include "stein_chisq/numerics.hpp"

namespace stein_chisq {

std::vector<double> squared_clt_alphas(double s, const BoundConstants& c) {
  return {c.clt_a0 + c.clt_b0 * s, c.clt_a1 + c.clt_b1 * s, c.clt_a2 + c.clt_b2 * s, c.clt_a3 + c.clt_b3 * s};
}

BoundReport bound_squared_clt(const NormBundle& norms, const MomentBundle& moments, int n, int d,
                              const BoundConstants& c) {
  if (n < 1 || d < 1) throw InvalidArgument("squared-sum bound needs n >= 1 and d >= 1");
  moments.validate();
  const auto alpha = squared_clt_alphas(moments.skew_abs, c);
  double sum = 0.0;
  for (int k = 0; k < 4; ++k) sum += alpha[static_cast<std::size_t>(k)] * norms.at(k);
  BoundReport r;
  r.theorem = "squared-clt";
  r.inputs = {{"n", n}, {"d", d}, {"EX8", moments.m8}, {"abs_EX3", moments.skew_abs}};
  r.value = c.clt_prefactor * d * moments.m8 / ((d + 2.0) * n) * sum;
  return r;
}

PearsonVariant parse_pearson_variant(const std::string& name) {
  if (name == "n1") return PearsonVariant::n1;
  if (name == "sqrt") return PearsonVariant::sqrt;
  if (name == "n1-pstar") return PearsonVariant::n1_pstar;
  if (name == "sqrt-pstar") return PearsonVariant::sqrt_pstar;
  throw InvalidArgument("unknown Pearson bound variant '" + name + "' (n1, sqrt, n1-pstar, sqrt-pstar)");
}

std::string to_string(PearsonVariant v) {
  switch (v) {
    case PearsonVariant::n1: return "n1";
    case PearsonVariant::sqrt: return "sqrt";
    case PearsonVariant::n1_pstar: return "n1-pstar";
    case PearsonVariant::sqrt_pstar: return "sqrt-pstar";
  }
  return "?";
}

double sum_inv_sqrt(const std::vector<double>& p) {
  double s = 0.0;
  for (double v : p) s += 1.0 / std::sqrt(v);
  return s;
}

BoundReport bound_pearson_smooth(const NormBundle& norms, const MultinomialModel& model, PearsonVariant variant,
                                 const BoundConstants& c) {
  const double n = model.n(), m = model.m(), t = n * model.p_star();
  const bool order_n = variant == PearsonVariant::n1 || variant == PearsonVariant::n1_pstar;
  double weighted = 0.0;
  if (order_n) {
    const double k[6] = {c.pn1_c0, c.pn1_c1, c.pn1_c2, c.pn1_c3, c.pn1_c4, c.pn1_c5};
    for (int i = 0; i < 6; ++i) weighted += k[i] * norms.at(i);
  } else {
    const double k[3] = {c.psq_c0, c.psq_c1, c.psq_c2};
    for (int i = 0; i < 3; ++i) weighted += k[i] * norms.at(i);
  }
  const double s = sum_inv_sqrt(model.p());
  double prefactor = 0.0;
  switch (variant) {
    case PearsonVariant::n1: prefactor = c.pn1_prefactor / ((m + 1.0) * n) * s * s; break;
    case PearsonVariant::sqrt: prefactor = c.psq_prefactor / ((m + 1.0) * std::sqrt(n)) * s; break;
    case PearsonVariant::n1_pstar: prefactor = c.pn1_prefactor * m / t; break;
    case PearsonVariant::sqrt_pstar: prefactor = c.psq_prefactor / std::sqrt(t); break;
  }
  BoundReport r;
  r.theorem = "pearson-" + to_string(variant);
  r.inputs = {{"n", n}, {"m", m}, {"p_star", model.p_star()}, {"sum_inv_sqrt_p", s}};
  r.value = prefactor * weighted;
  if (!model.every_cell_expected_at_least_one()) r.unsatisfied.push_back("n p_j >= 1 for all j");
  return r;
}

double kolmogorov_closed_form(int m, double t, const BoundConstants& c) {
  if (m < 2) throw InvalidArgument("Kolmogorov bound needs m >= 2");
  if (!(t > 0.0)) throw InvalidArgument("n p* must be positive");
  if (m == 2) return std::pow(t, -0.1) * (c.k2_c0 + c.k2_c1 * std::pow(t, -0.2) + c.k2_c2 * std::pow(t, -0.4));
  if (m == 3)
    return std::pow(t, -1.0 / 6) * (c.k3_c0 + c.k3_c1 * std::pow(t, -1.0 / 6) + c.k3_c2 * std::pow(t, -1.0 / 3));
  const double e = m - 3.0;
  return std::pow(e, -1.0 / 3) * std::pow(t, -1.0 / 6) *
         (c.k4_c0 + c.k4_c1 * std::pow(e, 1.0 / 6) * std::pow(t, -1.0 / 6) +
          c.k4_c2 * std::pow(e, 1.0 / 3) * std::pow(t, -1.0 / 3));
}

BoundReport bound_kolmogorov_pearson(const MultinomialModel& model, const BoundConstants& c) {
  const double t = model.n() * model.p_star();
  BoundReport r;
  r.theorem = "kolmogorov";
  r.inputs = {{"n", model.n()}, {"m", model.m()}, {"p_star", model.p_star()}, {"n_p_star", t}};
  r.value = kolmogorov_closed_form(model.m(), t, c);
  if (!model.every_cell_expected_at_least_one()) r.unsatisfied.push_back("n p* >= 1");
  return r;
}

LiteratureBounds bound_literature(int n, const std::vector<double>& p, const BoundConstants& c) {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  check_probability_vector(p);
  const double m = static_cast<double>(p.size());
  const double ps = *std::min_element(p.begin(), p.end());
  const double base = std::pow(ps, -1.5) / std::sqrt(static_cast<double>(n));
  return {c.lit_coef * m * base, c.lit_refined_coef * std::pow(m, 0.25) * base};
}

double chi_square_density_term(int m, double alpha) {
  if (m < 2) throw InvalidArgument("density term needs m >= 2");
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  if (m == 2) return std::sqrt(2.0 * alpha / std::numbers::pi);
  if (m == 3) return 0.5 * alpha;
  return alpha / (2.0 * std::sqrt(std::numbers::pi * (m - 3.0)));
}

double smoothed_indicator_bound(double t, double alpha, const BoundConstants& c) {
  return c.psq_prefactor / std::sqrt(t) *
         (c.psq_c0 * 1.0 + c.psq_c1 * 2.0 / alpha + c.psq_c2 * 4.0 / (alpha * alpha));
}

double kolmogorov_objective(int m, double t, double alpha, const BoundConstants& c) {
  return smoothed_indicator_bound(t, alpha, c) + chi_square_density_term(m, alpha);
}

double stated_alpha(int m, double t, const BoundConstants& c) {
  if (m == 2) return c.k2_alpha * std::pow(t, -0.2);
  if (m == 3) return c.k3_alpha * std::pow(t, -1.0 / 6);
  return c.k4_alpha * std::pow(m - 3.0, 1.0 / 6) * std::pow(t, -1.0 / 6);
}

SmoothedBound smooth_to_kolmogorov(const std::function<double(double)>& smooth_bound,
                                   const std::function<double(double)>& density, const std::vector<double>& grid) {
  if (grid.empty()) throw InvalidArgument("alpha grid is empty");
  std::vector<double> alphas = grid;
  std::sort(alphas.begin(), alphas.end());
  auto objective = [&](double a) { return smooth_bound(a) + density(a); };
  std::size_t best = 0;
  std::vector<double> vals;
  for (double a : alphas) {
    if (!(a > 0.0)) throw InvalidArgument("alpha grid entries must be positive");
    vals.push_back(objective(a));
  }
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (vals[i] < vals[best]) best = i;
  SmoothedBound out{alphas[best], vals[best]};
  if (alphas.size() >= 3) {
    const double lo = alphas[best == 0 ? 0 : best - 1];
    const double hi = alphas[std::min(best + 1, alphas.size() - 1)];
    if (hi > lo) {
      std::uintmax_t iters = 100;
      auto [a, v] = boost::math::tools::brent_find_minima(objective, lo, hi, 50, iters);
      if (v < out.value) out = {a, v};
    }
  }
  return out;
}

std::vector<double> default_alpha_grid(int m, double t, const BoundConstants& c) {
  const double centre = stated_alpha(m, t, c);
  std::vector<double> grid{centre};
  for (int i = -200; i <= 200; ++i) grid.push_back(centre * std::pow(10.0, i / 100.0));
  return grid;
}

}  // namespace stein_chisq
