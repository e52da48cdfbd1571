#include "stein_chisq/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "stein_chisq/error.hpp"
#include "stein_chisq/numerics.hpp"

namespace stein_chisq {

MultinomialModel::MultinomialModel(int n, std::vector<double> p) : n_(n), p_(std::move(p)) {
  if (n_ < 1) throw InvalidArgument("number of trials n must be at least 1");
  check_probability_vector(p_);
  p_star_ = *std::min_element(p_.begin(), p_.end());
}

namespace {

void check_counts(const MultinomialModel& model, const Counts& U) {
  if (static_cast<int>(U.size()) != model.m()) throw InvalidArgument("count vector length does not match p");
  long total = 0;
  for (int u : U) {
    if (u < 0) throw InvalidArgument("counts must be nonnegative");
    total += u;
  }
  if (total != model.n()) throw InvalidArgument("counts must sum to n");
}

}  // namespace

double pearson_statistic(const MultinomialModel& model, const Counts& U) {
  check_counts(model, U);
  double w = 0.0;
  for (int j = 0; j < model.m(); ++j) {
    const double e = model.n() * model.p()[static_cast<std::size_t>(j)];
    const double d = U[static_cast<std::size_t>(j)] - e;
    w += d * d / e;
  }
  return w;
}

std::vector<double> standardized_counts(const MultinomialModel& model, const Counts& U) {
  check_counts(model, U);
  std::vector<double> s;
  for (int j = 0; j < model.m(); ++j) {
    const double e = model.n() * model.p()[static_cast<std::size_t>(j)];
    s.push_back((U[static_cast<std::size_t>(j)] - e) / std::sqrt(e));
  }
  return s;
}

double squared_clt_statistic(const Eigen::MatrixXd& X) {
  if (X.rows() == 0 || X.cols() == 0) throw InvalidArgument("squared-sum statistic needs a nonempty matrix");
  return X.colwise().sum().squaredNorm() / static_cast<double>(X.rows());
}

double outcome_count(int n, int m) { return std::round(std::exp(log_binomial(n + m - 1, m - 1))); }

void enumerate_multinomial(const MultinomialModel& model, const OutcomeVisitor& visit, double budget) {
  const int n = model.n(), m = model.m();
  const double count = outcome_count(n, m);
  if (count > budget)
    throw BudgetExceeded("enumeration needs " + std::to_string(static_cast<long long>(count)) +
                         " outcomes, above the budget; use Monte Carlo mode");
  std::vector<double> logp;
  for (double p : model.p()) logp.push_back(std::log(p));
  std::vector<double> lfact(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) lfact[static_cast<std::size_t>(i)] = log_factorial(i);

  Counts U(static_cast<std::size_t>(m), 0);
  // Depth-first over cells 0..m-2; the last cell takes the remainder.
  std::function<void(int, int, double)> rec = [&](int cell, int left, double acc) {
    if (cell == m - 1) {
      U[static_cast<std::size_t>(cell)] = left;
      const double lp = acc - lfact[static_cast<std::size_t>(left)] + left * logp[static_cast<std::size_t>(cell)];
      visit(U, lfact[static_cast<std::size_t>(n)] + lp);
      return;
    }
    for (int u = 0; u <= left; ++u) {
      U[static_cast<std::size_t>(cell)] = u;
      rec(cell + 1, left - u, acc - lfact[static_cast<std::size_t>(u)] + u * logp[static_cast<std::size_t>(cell)]);
    }
  };
  rec(0, n, 0.0);
}

Counts sample_multinomial(const MultinomialModel& model, Rng& rng) {
  Counts U(static_cast<std::size_t>(model.m()), 0);
  int left = model.n();
  double mass = 1.0;
  for (int j = 0; j + 1 < model.m() && left > 0; ++j) {
    const double pj = model.p()[static_cast<std::size_t>(j)];
    const double q = std::clamp(pj / mass, 0.0, 1.0);
    std::binomial_distribution<int> bin(left, q);
    U[static_cast<std::size_t>(j)] = bin(rng);
    left -= U[static_cast<std::size_t>(j)];
    mass -= pj;
  }
  U.back() += left;
  return U;
}

IidLaw parse_iid_law(const std::string& name) {
  if (name == "rademacher") return IidLaw::rademacher;
  if (name == "uniform-discrete") return IidLaw::uniform_discrete;
  if (name == "shifted") return IidLaw::shifted;
  throw InvalidArgument("unknown distribution '" + name + "' (rademacher, uniform-discrete, shifted)");
}

std::string to_string(IidLaw law) {
  switch (law) {
    case IidLaw::rademacher: return "rademacher";
    case IidLaw::uniform_discrete: return "uniform-discrete";
    case IidLaw::shifted: return "shifted";
  }
  return "?";
}

std::vector<Atom> law_atoms(IidLaw law) {
  switch (law) {
    case IidLaw::rademacher:
      return {{-1.0, 0.5}, {1.0, 0.5}};
    case IidLaw::uniform_discrete: {
      const double a = std::sqrt(1.5);
      return {{-a, 1.0 / 3}, {0.0, 1.0 / 3}, {a, 1.0 / 3}};
    }
    case IidLaw::shifted: {
      const double q = 0.25, sd = std::sqrt(q * (1.0 - q));
      return {{-q / sd, 1.0 - q}, {(1.0 - q) / sd, q}};
    }
  }
  throw InvalidArgument("unknown law");
}

void MomentBundle::validate() const {
  if (!(abs3 >= 1.0 - 1e-12)) throw InvalidArgument("E|X|^3 >= 1 for a standardized X");
  if (!(m4 >= 1.0 - 1e-12 && m4 <= m8 * (1.0 + 1e-12)))
    throw InvalidArgument("moments must satisfy 1 <= E X^4 <= E X^8 for a standardized X");
  if (!(m6 >= 1.0 - 1e-12)) throw InvalidArgument("E X^6 >= 1 for a standardized X");
}

MomentBundle law_moments(IidLaw law) {
  MomentBundle mb{0.0, 0.0, 0.0, 0.0, 0.0};
  double skew = 0.0;
  for (const auto& a : law_atoms(law)) {
    mb.abs3 += a.prob * std::pow(std::abs(a.x), 3);
    mb.m4 += a.prob * std::pow(a.x, 4);
    mb.m6 += a.prob * std::pow(a.x, 6);
    mb.m8 += a.prob * std::pow(a.x, 8);
    skew += a.prob * std::pow(a.x, 3);
  }
  mb.skew_abs = std::abs(skew);
  return mb;
}

double sample_law(IidLaw law, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  const auto atoms = law_atoms(law);
  for (const auto& a : atoms) {
    acc += a.prob;
    if (u < acc) return a.x;
  }
  return atoms.back().x;
}

Eigen::MatrixXd sample_iid_matrix(IidLaw law, int n, int d, Rng& rng) {
  if (n < 1 || d < 1) throw InvalidArgument("sample matrix needs n >= 1 and d >= 1");
  Eigen::MatrixXd X(n, d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) X(i, k) = sample_law(law, rng);
  return X;
}

namespace {

void check_loo(int n, double p) {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("p must lie in (0, 1)");
}

// Bin(n, p) mass function in the log domain.
std::vector<double> binomial_pmf(int n, double p) {
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1);
  for (int b = 0; b <= n; ++b)
    pmf[static_cast<std::size_t>(b)] =
        std::exp(log_binomial(n, b) + b * std::log(p) + (n - b) * std::log1p(-p));
  return pmf;
}

}  // namespace

LooMoments leave_one_out_moments(int n, double p) {
  check_loo(n, p);
  // m4 = 3q^2 (n-1)/n + (n-1) q (1 - 13p + 23p^2)/(n^2 p) + p^2/n^2 and
  // m6 = 15q^3 + P2/(np) + P1/(np)^2 + P3/((np)^2 n), with
  //   P1 = q(1 - 86p + 724p^2 - 1626p^3 + 1044p^4), P2 = 5q^2(5 - 47p + 68p^2),
  //   P3 = -(1 - 2p)(1 - 60p + 420p^2 - 720p^3 + 360p^4).
  // Summed term by term these cancel badly when np < 1 (n = 1, p = 0.1 loses
  // six digits), so both are evaluated as one polynomial in p over the common
  // denominator; the coefficients are exact integers.
  const double nn = n, q = 1.0 - p;
  const double c4[4] = {nn - 1.0, (nn - 1.0) * (3.0 * nn - 14.0), -6.0 * (nn - 6.0) * (nn - 1.0),
                        3.0 * nn * nn - 26.0 * nn + 24.0};
  const double c6[6] = {nn - 1.0,
                        (nn - 1.0) * (25.0 * nn - 62.0),
                        15.0 * (nn - 1.0) * (nn * nn - 18.0 * nn + 36.0),
                        -5.0 * (nn - 1.0) * (9.0 * nn * nn - 158.0 * nn + 312.0),
                        15.0 * (nn - 1.0) * (3.0 * nn * nn - 58.0 * nn + 120.0),
                        ((-15.0 * nn + 340.0) * nn - 1044.0) * nn + 720.0};
  auto horner = [p](const double* c, int len) {
    double v = 0.0;
    for (int i = len - 1; i >= 0; --i) v = v * p + c[i];
    return v;
  };
  LooMoments out{};
  out.m2 = ((nn - 1.0) * q + p) / nn;
  out.m4 = horner(c4, 4) / (nn * nn * p);
  out.m6 = horner(c6, 6) / (nn * nn * nn * p * p);
  return out;
}

double leave_one_out_abs_moment(int n, double p, double q, double shift) {
  check_loo(n, p);
  const auto pmf = binomial_pmf(n - 1, p);
  const double np = n * p, scale = std::sqrt(np);
  NeumaierSum sum;
  for (int b = 0; b < n; ++b)
    sum += pmf[static_cast<std::size_t>(b)] * std::pow(std::abs((b - np) / scale + shift), q);
  return sum.value();
}

LooMoments oracle_leave_one_out_moments(int n, double p) {
  check_loo(n, p);
  const auto pmf = binomial_pmf(n - 1, p);
  const double np = n * p, scale = std::sqrt(np);
  NeumaierSum s2, s4, s6;
  for (int b = 0; b < n; ++b) {
    const double x = (b - np) / scale, w = pmf[static_cast<std::size_t>(b)];
    const double x2 = x * x;
    s2 += w * x2;
    s4 += w * x2 * x2;
    s6 += w * x2 * x2 * x2;
  }
  return {s2.value(), s4.value(), s6.value()};
}

double binomial_central_moment(int n, double p, int order) {
  if (order < 1 || order > 6) throw InvalidArgument("central moment order must be in 1..6");
  if (n < 0 || !(p >= 0.0 && p <= 1.0)) throw InvalidArgument("invalid binomial parameters");
  const double q = 1.0 - p, v = n * p * q, pq = p * q;
  switch (order) {
    case 1: return 0.0;
    case 2: return v;
    case 3: return v * (q - p);
    case 4: return v * (1.0 + 3.0 * (n - 2) * pq);
    case 5: return v * (q - p) * (1.0 + (10.0 * n - 12.0) * pq);
    default: return v * (15.0 * v * v + v * (25.0 - 130.0 * pq) + 1.0 - 30.0 * pq + 120.0 * pq * pq);
  }
}

double binomial_central_moment_oracle(int n, double p, int order) {
  if (order < 1) throw InvalidArgument("central moment order must be positive");
  const auto pmf = binomial_pmf(n, p);
  NeumaierSum sum;
  for (int b = 0; b <= n; ++b) sum += pmf[static_cast<std::size_t>(b)] * std::pow(b - n * p, order);
  return sum.value();
}

double xi_cap_constant(int power, const BoundConstants& c) {
  switch (power) {
    case 1: return c.xi_c1;
    case 2: return c.xi_c2;
    case 3: return c.xi_c3;
    case 4: return c.xi_c4;
    case 6: return c.xi_c6;
    default: throw InvalidArgument("power must be one of 1, 2, 3, 4, 6");
  }
}

namespace {

// int_0^1 |c + theta d|^q d theta for d > 0.
double theta_average(double c, double d, double q) {
  auto F = [&](double y) { return y * std::pow(std::abs(y), q); };
  return (F(c + d) - F(c)) / ((q + 1.0) * d);
}

double theta_value(ThetaMode mode) {
  switch (mode) {
    case ThetaMode::zero: return 0.0;
    case ThetaMode::half: return 0.5;
    case ThetaMode::one: return 1.0;
    default: return 0.0;
  }
}

}  // namespace

XiCheck indicator_xi_check(const MultinomialModel& model, int j, int k, int power, ThetaMode theta,
                           std::size_t mc_budget, std::uint64_t seed, const BoundConstants& c) {
  if (j < 0 || k < 0 || j >= model.m() || k >= model.m()) throw InvalidArgument("cell index out of range");
  const double pj = model.p()[static_cast<std::size_t>(j)], pk = model.p()[static_cast<std::size_t>(k)];
  const int n = model.n();
  const double npk = n * pk, scale = std::sqrt(npk);
  XiCheck out;
  out.cap = xi_cap_constant(power, c) * pj;
  out.hypothesis_ok = n * pj >= 1.0;

  // Exact: trial 1 lands in j; the other n - 1 trials give B ~ Bin(n-1, p_k).
  // theta only enters when j == k.
  const auto pmf = binomial_pmf(n - 1, pk);
  NeumaierSum exact;
  for (int b = 0; b < n; ++b) {
    const double s = (b - npk) / scale, w = pmf[static_cast<std::size_t>(b)];
    if (j != k) {
      exact += w * std::pow(std::abs(s), power);
    } else if (theta == ThetaMode::uniform) {
      exact += w * theta_average(s, 1.0 / scale, power);
    } else {
      exact += w * std::pow(std::abs(s + theta_value(theta) / scale), power);
    }
  }
  out.exact = pj * exact.value();

  if (mc_budget == 0) return out;
  std::discrete_distribution<int> cell(model.p().begin(), model.p().end());
  NeumaierSum sum, sum_sq;
  for (std::size_t start = 0, chunk = 0; start < mc_budget; start += kChunkSize, ++chunk) {
    Rng rng(seed, chunk);
    std::binomial_distribution<int> rest(n - 1, pk);
    const std::size_t end = std::min<std::size_t>(mc_budget, start + kChunkSize);
    for (std::size_t i = start; i < end; ++i) {
      const int first = cell(rng);
      const int b = rest(rng);
      const double th = theta == ThetaMode::uniform ? rng.uniform() : theta_value(theta);
      double y = 0.0;
      if (first == j) {
        const double xi = (b - npk) / scale + (first == k ? th / scale : 0.0);
        y = std::pow(std::abs(xi), power);
      }
      sum += y;
      sum_sq += y * y;
    }
  }
  const double nn = static_cast<double>(mc_budget);
  out.estimate = sum.value() / nn;
  const double var = std::max(0.0, (sum_sq.value() - nn * out.estimate * out.estimate) / (nn - 1.0));
  out.se = std::sqrt(var / nn);
  return out;
}

}  // namespace stein_chisq
