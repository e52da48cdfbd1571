#include "stein_chisq/gamma_stein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "stein_chisq/error.hpp"
#include "stein_chisq/rng.hpp"

namespace stein_chisq {

GammaParams::GammaParams(double shape, double rate) : r(shape), lambda(rate) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("gamma shape r must be positive");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("gamma rate lambda must be positive");
}

double GammaParams::sd() const noexcept { return std::sqrt(r) / lambda; }

Interval verification_domain(const GammaParams& p) { return {0.0, p.mean() + 40.0 * p.sd()}; }

double gamma_expectation(const RealFunction& f, const GammaParams& p, const std::vector<double>& knots,
                         double rel_tol) {
  const double log_norm = p.r * std::log(p.lambda) - std::lgamma(p.r);
  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  opts.abs_tol = 1e-15;
  opts.tail_scale = 2.0 / p.lambda;

  double head = 0.0, start = 0.0;
  if (p.r < 1.0) {
    // x = y^(1/r) on [0, 1] absorbs the x^(r-1) singularity.
    auto g = [&](double y) {
      const double x = std::pow(y, 1.0 / p.r);
      return f(x) * std::exp(log_norm - p.lambda * x) / p.r;
    };
    QuadratureOptions hopts = opts;
    for (double k : knots)
      if (k > 0.0 && k < 1.0) hopts.breakpoints.push_back(std::pow(k, p.r));
    head = integrate(g, {0.0, 1.0}, hopts).value;
    start = 1.0;
  }
  auto density = [&](double x) {
    if (x <= 0.0) return 0.0;
    return std::exp(log_norm + (p.r - 1.0) * std::log(x) - p.lambda * x);
  };
  auto g = [&](double x) {
    const double d = density(x);
    return d == 0.0 ? 0.0 : f(x) * d;
  };
  for (double j : {-6.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 6.0, 10.0, 16.0, 24.0}) {
    const double b = p.mean() + j * p.sd();
    if (b > start) opts.breakpoints.push_back(b);
  }
  for (double k : knots)
    if (k > start) opts.breakpoints.push_back(k);
  return head + integrate(g, Interval::half_line(start), opts).value;
}

double gamma_expectation(const TestFunction& h, const GammaParams& params, double rel_tol) {
  if (h.constant()) return h.value(0.0);
  return gamma_expectation([&](double x) { return h.value(x); }, params, h.knots(), rel_tol);
}

DerivativeTable::DerivativeTable(TestFunction h, GammaParams params, int max_order, SolverOptions opts)
    : h_(std::move(h)), params_(params), max_order_(max_order), opts_(opts) {
  if (max_order_ < 1) throw InvalidArgument("derivative table needs max_order >= 1");
  if (max_order_ > h_.max_order() + 1)
    throw InvalidArgument("derivative order " + std::to_string(max_order_) + " needs h of order " +
                          std::to_string(max_order_ - 1) + ", but " + h_.descriptor() + " only has " +
                          std::to_string(h_.max_order()));
  gamma_mean_h_ = gamma_expectation(h_, params_);
  binom_.resize(static_cast<std::size_t>(max_order_));
  for (int m = 0; m < max_order_; ++m)
    for (int j = 0; j <= m; ++j)
      binom_[static_cast<std::size_t>(m)].push_back(std::exp(log_binomial(m, j)));
  // f'(0) = H(0)/r; f^(k)(0) = [h^(k-1)(0) + (k-1) lambda f^(k-1)(0)] / (r + k - 1).
  zero_values_.assign(static_cast<std::size_t>(max_order_) + 1, 0.0);
  zero_values_[1] = big_h(0, 0.0) / params_.r;
  for (int k = 2; k <= max_order_; ++k)
    zero_values_[static_cast<std::size_t>(k)] =
        (h_(k - 1, 0.0) + (k - 1) * params_.lambda * zero_values_[static_cast<std::size_t>(k) - 1]) /
        (params_.r + k - 1);
}

double DerivativeTable::big_h(int j, double x) const { return j == 0 ? h_(0, x) - gamma_mean_h_ : h_(j, x); }

double DerivativeTable::at_zero(int k) const {
  if (k < 1 || k > max_order_) throw InvalidArgument("derivative order out of range");
  return zero_values_[static_cast<std::size_t>(k)];
}

double DerivativeTable::lower_integral(int k, double x) const {
  const int m = k - 1;
  const double r = params_.r, lam = params_.lambda;
  const auto& c = binom_[static_cast<std::size_t>(m)];
  auto poly = [&](double s) {
    double sum = 0.0, sj = 1.0;
    const double t = lam * (1.0 - s);
    for (int j = 0; j <= m; ++j) {
      sum += c[static_cast<std::size_t>(j)] * sj * big_h(j, x * s) * std::pow(t, m - j);
      sj *= s;
    }
    return sum;
  };
  QuadratureOptions q;
  q.rel_tol = opts_.rel_tol;
  q.abs_tol = opts_.abs_tol;
  std::vector<double> sbreaks;
  for (double kn : h_.knots())
    if (kn > 0.0 && kn < x) sbreaks.push_back(kn / x);
  if (r < 1.0) {
    // s = v^(1/r): s^(r-1) ds = dv / r.
    auto g = [&](double v) {
      const double s = std::pow(v, 1.0 / r);
      return std::exp(lam * x * (1.0 - s)) * poly(s) / r;
    };
    for (double s : sbreaks) q.breakpoints.push_back(std::pow(s, r));
    return integrate(g, {0.0, 1.0}, q).value;
  }
  auto g = [&](double s) {
    const double logw = lam * x * (1.0 - s) + (r > 1.0 ? (r - 1.0) * std::log(s) : 0.0);
    return logw == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(logw) * poly(s);
  };
  q.breakpoints = sbreaks;
  for (double w = 1.0 / (r + 1.0); w < 0.5; w *= 2.0) q.breakpoints.push_back(1.0 - w);
  return integrate(g, {0.0, 1.0}, q).value;
}

double DerivativeTable::upper_integral(int k, double x) const {
  const int m = k - 1;
  const double r = params_.r, lam = params_.lambda;
  const auto& c = binom_[static_cast<std::size_t>(m)];
  // s = 1 + u, u in [0, inf).
  auto g = [&](double u) {
    const double s = 1.0 + u;
    const double w = std::exp((r - 1.0) * std::log1p(u) - lam * x * u);
    if (w == 0.0) return 0.0;
    double sum = 0.0, sj = 1.0;
    const double t = -lam * u;
    for (int j = 0; j <= m; ++j) {
      sum += c[static_cast<std::size_t>(j)] * sj * big_h(j, x * s) * std::pow(t, m - j);
      sj *= s;
    }
    return w * sum;
  };
  QuadratureOptions q;
  q.rel_tol = opts_.rel_tol;
  q.abs_tol = opts_.abs_tol;
  const double decay = lam * x - (r - 1.0);
  q.tail_scale = 1.0 / std::max(decay, std::sqrt(std::max(r - 1.0, 1.0)));
  for (double kn : h_.knots())
    if (kn > x) q.breakpoints.push_back(kn / x - 1.0);
  return -integrate(g, Interval::half_line(0.0), q).value;
}

double DerivativeTable::derivative(int k, double x, Branch branch) const {
  if (k < 1 || k > max_order_)
    throw InvalidArgument("derivative order " + std::to_string(k) + " outside 1.." + std::to_string(max_order_));
  if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument("solution is defined for finite x >= 0");
  if (h_.constant()) return 0.0;
  if (x == 0.0 && branch != Branch::upper) return zero_values_[static_cast<std::size_t>(k)];
  const bool lower = branch == Branch::lower || (branch == Branch::automatic && x <= params_.mean());
  return lower ? lower_integral(k, x) : upper_integral(k, x);
}

double DerivativeTable::stein_residual(double x) const {
  if (max_order_ < 2) throw InvalidArgument("Stein residual needs max_order >= 2");
  const double f1 = derivative(1, x, Branch::automatic);
  const double f2 = derivative(2, x, Branch::automatic);
  return x * f2 + (params_.r - params_.lambda * x) * f1 - big_h(0, x);
}

double DerivativeTable::recurrence_residual(int k, double x) const {
  if (k < 1 || k + 2 > max_order_) throw InvalidArgument("recurrence residual needs 1 <= k <= max_order - 2");
  return x * (*this)(k + 2, x) + (params_.r + k - params_.lambda * x) * (*this)(k + 1, x) -
         k * params_.lambda * (*this)(k, x) - h_(k, x);
}

double solve_first_derivative(const TestFunction& h, const GammaParams& params, double x) {
  return DerivativeTable(h, params, 1)(1, x);
}

double BoundCatalog::tightest_derivative() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [name, v] : derivative) best = std::min(best, v);
  return best;
}

double BoundCatalog::tightest_weighted() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [name, v] : weighted) best = std::min(best, v);
  return best;
}

BoundCatalog bound_catalog(const GammaParams& p, int k, const NormBundle& norms, const BoundConstants& c) {
  if (k < 1) throw InvalidArgument("bound catalog needs k >= 1");
  BoundCatalog out;
  const double r = p.r, lam = p.lambda;
  auto attempt = [&](std::map<std::string, double>& into, const std::string& name, auto&& fn) {
    try {
      into[name] = fn();
    } catch (const MissingNorm& e) {
      out.skipped[name] = e.what();
    }
  };
  attempt(out.derivative, "luk", [&] { return norms.at(k) / (k * lam); });
  attempt(out.derivative, "alternative", [&] {
    return (c.alt_lead / std::sqrt(r + k - 1) + c.alt_tail / (r + k - 1)) * norms.at(k - 1);
  });
  if (k >= 2) {
    attempt(out.derivative, "new", [&] {
      return c.new_prefactor / (r + k - 1) * (c.new_coef_prev * norms.at(k - 1) + c.new_coef_prev2 * lam * norms.at(k - 2));
    });
    if (p.is_chi_square()) {
      const double dof = 2.0 * r;
      attempt(out.derivative, "chisq", [&] {
        return c.chisq_prefactor / (dof + 2.0) * (c.new_coef_prev * norms.at(k - 1) + norms.at(k - 2));
      });
    } else {
      out.skipped["chisq"] = "only for lambda = 1/2";
    }
    // Weighted bounds on ||x f^(k)||.
    if (k == 2)
      attempt(out.weighted, "xf2", [&] { return c.xf2_coef * norms.at(0); });
    else
      attempt(out.weighted, "xfk2", [&] { return c.xfk2_coef * norms.at(k - 2); });
    attempt(out.weighted, "xfk1", [&] {
      return c.xfk1_coef / lam * (c.xfk1_shift + std::sqrt(r + k - 1)) * norms.at(k - 1);
    });
  }
  return out;
}

double characterization_residual(const DerivativeFn& f, const GammaParams& p, ResidualMode mode,
                                 std::size_t budget, std::uint64_t seed) {
  auto op = [&](double x) { return x * f(2, x) + (p.r - p.lambda * x) * f(1, x); };
  if (mode == ResidualMode::quadrature) return gamma_expectation(op, p, {}, 1e-10);
  if (budget == 0) throw BudgetExceeded("Monte Carlo residual needs a positive budget");
  NeumaierSum sum;
  std::size_t done = 0;
  for (std::uint64_t chunk = 0; done < budget; ++chunk) {
    Rng rng(seed, chunk);
    std::gamma_distribution<double> gamma(p.r, 1.0 / p.lambda);
    const std::size_t take = std::min<std::size_t>(kChunkSize, budget - done);
    for (std::size_t i = 0; i < take; ++i) sum += op(gamma(rng));
    done += take;
  }
  return sum.value() / static_cast<double>(budget);
}

}  // namespace stein_chisq
