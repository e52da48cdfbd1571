#include "stein_chisq/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include "stein_chisq/error.hpp"

namespace stein_chisq {

Interval Interval::finite(double lo, double hi) {
  if (!(lo < hi)) throw InvalidArgument("interval requires lo < hi");
  return {lo, hi};
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Piece {
  double a, b;
  bool tail;
  double value, error, l1;
};

struct ByError {
  bool operator()(const Piece& x, const Piece& y) const { return x.error < y.error; }
};

class Engine {
 public:
  Engine(const RealFunction& f, double tail_origin, double tail_scale)
      : f_(f), x0_(tail_origin), scale_(tail_scale) {}

  Piece eval(double a, double b, bool tail) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    // Integrate over [-1, 1] so the returned error needs no rescaling.
    auto g = [&](double u) {
      const double t = mid + half * u;
      double x = t, jac = 1.0;
      if (tail) {
        const double om = 1.0 - t;
        x = x0_ + scale_ * t / om;
        jac = scale_ / (om * om);
      }
      const double y = f_(x);
      if (!std::isfinite(y)) throw NonFiniteValue(x);
      return tail && y == 0.0 ? 0.0 : y * jac * half;
    };
    double err = 0.0, l1 = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(g, -1.0, 1.0, 0, 0.0, &err, &l1);
    evaluations_ += 21;
    return {a, b, tail, v, err, l1};
  }

  std::size_t evaluations() const { return evaluations_; }

 private:
  const RealFunction& f_;
  double x0_, scale_;
  std::size_t evaluations_ = 0;
};

}  // namespace

QuadratureResult integrate(const RealFunction& f, const Interval& domain, const QuadratureOptions& opts) {
  if (!(domain.lo < domain.hi)) throw InvalidArgument("integration interval is empty");
  if (!(opts.rel_tol > 0.0 && opts.rel_tol < 1.0)) throw InvalidArgument("rel_tol must lie in (0, 1)");
  if (!(opts.tail_scale > 0.0)) throw InvalidArgument("tail_scale must be positive");

  std::vector<double> cuts{domain.lo};
  std::vector<double> bp = opts.breakpoints;
  std::sort(bp.begin(), bp.end());
  for (double c : bp)
    if (std::isfinite(c) && c > cuts.back() && c < domain.hi) cuts.push_back(c);
  if (!domain.unbounded()) cuts.push_back(domain.hi);

  Engine engine(f, cuts.back(), opts.tail_scale);
  std::priority_queue<Piece, std::vector<Piece>, ByError> queue;
  std::vector<Piece> done;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) queue.push(engine.eval(cuts[i], cuts[i + 1], false));
  if (domain.unbounded()) queue.push(engine.eval(0.0, 1.0, true));

  auto totals = [&] {
    NeumaierSum v, e, l;
    auto acc = [&](const Piece& p) {
      v += p.value;
      e += p.error;
      l += p.l1;
    };
    for (const auto& p : done) acc(p);
    auto copy = queue;
    while (!copy.empty()) {
      acc(copy.top());
      copy.pop();
    }
    return std::array<double, 3>{v.value(), e.value(), l.value()};
  };

  double value = 0.0, error = 0.0, l1 = 0.0;
  std::size_t steps = 0;
  for (;;) {
    if (steps % 16 == 0 || queue.empty()) {
      auto t = totals();
      value = t[0], error = t[1], l1 = t[2];
    }
    const double target = std::max({opts.abs_tol, opts.rel_tol * std::abs(value), 64.0 * kEps * l1});
    if (error <= target || queue.empty()) break;
    if (queue.size() + done.size() >= opts.max_intervals) {
      throw QuadratureError("quadrature failed: interval budget exhausted (estimate " + std::to_string(value) +
                                ", error " + std::to_string(error) + ")",
                            value, error);
    }
    Piece worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 64.0 * kEps * std::max(1.0, std::abs(mid))) {
      done.push_back(worst);  // cannot split further
      continue;
    }
    Piece left = engine.eval(worst.a, mid, worst.tail);
    Piece right = engine.eval(mid, worst.b, worst.tail);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    queue.push(left);
    queue.push(right);
    ++steps;
  }
  auto t = totals();
  return {t[0], t[1], engine.evaluations()};
}

QuadratureResult integrate_semiaxis(const RealFunction& f, const Interval& domain, double rel_tol) {
  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  return integrate(f, domain, opts);
}

namespace {

// Series for P(r, x); converges quickly for x < r + 1.
double lower_gamma_series(double r, double x) {
  double term = 1.0 / r, sum = term;
  for (int n = 1; n < 100000; ++n) {
    term *= x / (r + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return std::exp(r * std::log(x) - x - std::lgamma(r) + std::log(sum));
}

// Modified Lentz continued fraction for Q(r, x); used for x >= r + 1.
double upper_gamma_fraction(double r, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - r, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - r);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(r * std::log(x) - x - std::lgamma(r) + std::log(h));
}

void check_gamma_args(double r, double x) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("incomplete gamma requires r > 0");
  if (!(x >= 0.0) || std::isnan(x)) throw InvalidArgument("incomplete gamma requires x >= 0");
}

}  // namespace

double reg_lower_gamma(double r, double x) {
  check_gamma_args(r, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < r + 1.0) return std::min(1.0, lower_gamma_series(r, x));
  return std::max(0.0, 1.0 - upper_gamma_fraction(r, x));
}

double reg_upper_gamma(double r, double x) {
  check_gamma_args(r, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < r + 1.0) return std::max(0.0, 1.0 - lower_gamma_series(r, x));
  return std::min(1.0, upper_gamma_fraction(r, x));
}

double chi_square_cdf(double dof, double z) {
  if (!(dof > 0.0)) throw InvalidArgument("chi-square degrees of freedom must be positive");
  if (z <= 0.0) return 0.0;
  return reg_lower_gamma(0.5 * dof, 0.5 * z);
}

namespace {

struct GridPoint {
  double x, y;
};

double checked(const RealFunction& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) throw NonFiniteValue(x);
  return y;
}

}  // namespace

std::pair<double, double> argmax_abs(const RealFunction& f, const Interval& domain, const SupNormOptions& opts) {
  if (opts.grid < 64) throw InvalidArgument("sup-norm grid must have at least 64 points");
  if (!(domain.lo < domain.hi)) throw InvalidArgument("sup-norm domain is empty");
  const std::size_t n = opts.grid;
  // Unbounded domains use x = lo + L t/(1-t) on an equispaced t grid.
  auto to_x = [&](double t) {
    if (!domain.unbounded()) return domain.lo + t * (domain.hi - domain.lo);
    return domain.lo + opts.scale * t / (1.0 - t);
  };
  std::vector<GridPoint> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = domain.unbounded() ? static_cast<double>(i) / n : static_cast<double>(i) / (n - 1);
    const double x = to_x(t);
    pts.push_back({x, std::abs(checked(f, x))});
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (pts[i].y > pts[best].y) best = i;
  double bx = pts[best].x, by = pts[best].y;
  if (!opts.refine) return {bx, by};

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    const bool left_ok = i == 0 || pts[i].y >= pts[i - 1].y;
    const bool right_ok = i + 1 == n || pts[i].y >= pts[i + 1].y;
    if (left_ok && right_ok) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a].y > pts[b].y; });
  if (order.size() > opts.refine_candidates) order.resize(opts.refine_candidates);
  for (std::size_t i : order) {
    const double lo = pts[i == 0 ? 0 : i - 1].x;
    const double hi = i + 1 < n ? pts[i + 1].x : pts[i].x;
    if (!(hi > lo)) continue;
    auto neg = [&](double x) { return -std::abs(checked(f, x)); };
    std::uintmax_t iters = 80;
    auto [x, y] = boost::math::tools::brent_find_minima(neg, lo, hi, 40, iters);
    if (-y > by) bx = x, by = -y;
  }
  return {bx, by};
}

double sup_norm_estimate(const RealFunction& f, const Interval& domain, const SupNormOptions& opts) {
  return argmax_abs(f, domain, opts).second;
}

double sup_norm_estimate(const RealFunction& f, const Interval& domain, std::size_t grid, bool refine) {
  SupNormOptions opts;
  opts.grid = grid;
  opts.refine = refine;
  return sup_norm_estimate(f, domain, opts);
}

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw InvalidArgument("Gauss-Legendre rule needs at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double beta = kk / std::sqrt(4.0 * kk * kk - 1.0);
    jacobi(k, k - 1) = beta;
    jacobi(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  QuadratureRule rule;
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (std::size_t i = 0; i < n; ++i) {
    const double v0 = eig.eigenvectors()(0, static_cast<Eigen::Index>(i));
    rule.nodes.push_back(mid + half * eig.eigenvalues()(static_cast<Eigen::Index>(i)));
    rule.weights.push_back(2.0 * v0 * v0 * half);
  }
  return rule;
}

double log_factorial(double n) { return std::lgamma(n + 1.0); }

double log_binomial(double n, double k) {
  if (k < 0.0 || k > n) return -std::numeric_limits<double>::infinity();
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

void NeumaierSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    comp_ += (sum_ - t) + x;
  else
    comp_ += (x - t) + sum_;
  sum_ = t;
}

std::pair<double, double> ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) throw InvalidArgument("slope fit needs at least 3 paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n, my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("slope fit needs distinct abscissae");
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - my - slope * (x[i] - mx);
    rss += r * r;
  }
  return {slope, std::sqrt(rss / (n - 2.0) / sxx)};
}

}  // namespace stein_chisq

namespace stein_chisq {

void check_probability_vector(const std::vector<double>& p) {
  if (p.size() < 2) throw InvalidArgument("need at least two cell probabilities");
  NeumaierSum total;
  for (double v : p) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("cell probabilities must be positive");
    total += v;
  }
  if (std::abs(total.value() - 1.0) > 1e-12) throw InvalidArgument("probabilities must sum to 1");
}

}  // namespace stein_chisq
