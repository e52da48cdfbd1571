#include "stein_chisq/test_functions.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "stein_chisq/error.hpp"

namespace stein_chisq {

NormBundle::NormBundle(std::vector<std::optional<double>> norms) : norms_(std::move(norms)) {
  for (const auto& v : norms_)
    if (v && !(*v >= 0.0)) throw InvalidArgument("sup-norm entries must be nonnegative");
}

NormBundle NormBundle::from_values(const std::vector<double>& norms) {
  std::vector<std::optional<double>> v(norms.begin(), norms.end());
  return NormBundle(std::move(v));
}

double NormBundle::at(int k) const {
  if (!has(k)) throw MissingNorm(k);
  return *norms_[static_cast<std::size_t>(k)];
}

bool NormBundle::has(int k) const noexcept {
  return k >= 0 && k < size() && norms_[static_cast<std::size_t>(k)].has_value();
}

void NormBundle::set(int k, double value) {
  if (k < 0) throw InvalidArgument("norm order must be nonnegative");
  if (!(value >= 0.0)) throw InvalidArgument("sup-norm entries must be nonnegative");
  if (k >= size()) norms_.resize(static_cast<std::size_t>(k) + 1);
  norms_[static_cast<std::size_t>(k)] = value;
}

NormBundle NormBundle::scaled(double c) const {
  NormBundle out = *this;
  for (auto& v : out.norms_)
    if (v) *v *= c;
  return out;
}

TestFunction::TestFunction(std::string descriptor, int max_order, Evaluator eval,
                           std::vector<std::optional<double>> certified, std::vector<double> knots)
    : descriptor_(std::move(descriptor)),
      max_order_(max_order),
      eval_(std::move(eval)),
      norms_(std::move(certified)),
      knots_(std::move(knots)) {
  if (max_order_ < 0) throw InvalidArgument("max_order must be nonnegative");
}

double TestFunction::operator()(int k, double x) const {
  if (k < 0 || k > max_order_)
    throw InvalidArgument(descriptor_ + ": derivative order " + std::to_string(k) + " not available");
  return eval_(k, x);
}

TestFunction make_halpha(double z, double alpha) {
  if (!(z > 0.0)) throw InvalidArgument("halpha: z must be positive");
  if (!(alpha > 0.0)) throw InvalidArgument("halpha: alpha must be positive");
  const double a2 = alpha * alpha;
  const double mid = z + 0.5 * alpha, end = z + alpha;
  auto eval = [=](int k, double x) -> double {
    // Left-closed pieces: (-inf, z], (z, mid], (mid, end], (end, inf).
    if (x <= z) return k == 0 ? 1.0 : 0.0;
    if (x <= mid) {
      const double d = x - z;
      return k == 0 ? 1.0 - 2.0 * d * d / a2 : k == 1 ? -4.0 * d / a2 : -4.0 / a2;
    }
    if (x <= end) {
      const double d = x - end;
      return k == 0 ? 2.0 * d * d / a2 : k == 1 ? 4.0 * d / a2 : 4.0 / a2;
    }
    return 0.0;
  };
  std::ostringstream name;
  name << "halpha:" << z << "," << alpha;
  TestFunction h(name.str(), 2, eval, {1.0, 2.0 / alpha, 4.0 / a2}, {z, mid, end});
  h.with_support_end(end);
  return h;
}

TestFunction make_cosine(double omega, int max_order) {
  if (!(omega > 0.0)) throw InvalidArgument("cos: omega must be positive");
  auto eval = [omega](int k, double x) {
    const double wk = std::pow(omega, k);
    switch (k % 4) {
      case 0: return wk * std::cos(omega * x);
      case 1: return -wk * std::sin(omega * x);
      case 2: return -wk * std::cos(omega * x);
      default: return wk * std::sin(omega * x);
    }
  };
  std::vector<std::optional<double>> norms;
  for (int k = 0; k <= max_order; ++k) norms.emplace_back(std::pow(omega, k));
  std::ostringstream name;
  name << "cos:" << omega;
  return TestFunction(name.str(), max_order, eval, std::move(norms));
}

TestFunction make_damped_exponential(int max_order) {
  auto eval = [](int k, double x) { return (k % 2 ? -1.0 : 1.0) * std::exp(-x); };
  return TestFunction("exp", max_order, eval, std::vector<std::optional<double>>(max_order + 1, 1.0));
}

namespace {

using Poly = std::vector<double>;  // coefficients, lowest degree first

double horner(const Poly& p, double u) {
  double s = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) s = s * u + *it;
  return s;
}

Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(static_cast<double>(i) * p[i]);
  if (d.empty()) d.push_back(0.0);
  return d;
}

// Q_k with d^k/dy^k sigma(y) = u(1-u) Q_k(u), u = sigma(y), k >= 1.
std::vector<Poly> logistic_q(int max_order) {
  std::vector<Poly> q(static_cast<std::size_t>(max_order) + 1);
  q[1] = {1.0};
  for (int k = 1; k < max_order; ++k) {
    // d/dy [u(1-u)Q] = u(1-u) [(1-2u) Q + u(1-u) Q'].
    const Poly& a = q[static_cast<std::size_t>(k)];
    Poly da = derivative(a);
    Poly next(a.size() + 2, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      next[i] += a[i];
      next[i + 1] -= 2.0 * a[i];
    }
    for (std::size_t i = 0; i < da.size(); ++i) {
      next[i + 1] += da[i];
      next[i + 2] -= da[i];
    }
    q[static_cast<std::size_t>(k) + 1] = next;
  }
  return q;
}

// max over u in [1/2, 1] of |u(1-u) Q(u)|: endpoints plus every bracketed
// critical point of the full polynomial.
double max_on_half_unit(const Poly& q) {
  Poly full(q.size() + 2, 0.0);
  for (std::size_t i = 0; i < q.size(); ++i) {
    full[i + 1] += q[i];
    full[i + 2] -= q[i];
  }
  const Poly d = derivative(full);
  auto val = [&](double u) { return std::abs(horner(full, u)); };
  double best = std::max(val(0.5), val(1.0));
  const int grid = 8192;
  double prev_u = 0.5, prev_d = horner(d, prev_u);
  for (int i = 1; i <= grid; ++i) {
    const double u = 0.5 + 0.5 * i / grid;
    const double du = horner(d, u);
    if (du == 0.0) best = std::max(best, val(u));
    if (prev_d * du < 0.0) {
      std::uintmax_t iters = 200;
      auto tol = boost::math::tools::eps_tolerance<double>(52);
      auto root = boost::math::tools::toms748_solve([&](double x) { return horner(d, x); }, prev_u, u, prev_d, du,
                                                    tol, iters);
      best = std::max({best, val(root.first), val(root.second)});
    }
    prev_u = u, prev_d = du;
  }
  return best;
}

}  // namespace

TestFunction make_logistic(double scale, int max_order) {
  if (!(scale > 0.0)) throw InvalidArgument("logistic: scale must be positive");
  const auto q = logistic_q(std::max(max_order, 1));
  auto eval = [scale, q](int k, double x) {
    const double y = x / scale;
    const double e = std::exp(-std::abs(y));
    // u = sigma(y) and v = 1 - u without cancellation.
    const double u = y >= 0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
    const double v = y >= 0 ? e / (1.0 + e) : 1.0 / (1.0 + e);
    if (k == 0) return u;
    return u * v * horner(q[static_cast<std::size_t>(k)], u) / std::pow(scale, k);
  };
  std::vector<std::optional<double>> norms{1.0};
  for (int k = 1; k <= max_order; ++k)
    norms.emplace_back(max_on_half_unit(q[static_cast<std::size_t>(k)]) / std::pow(scale, k));
  std::ostringstream name;
  name << "logistic:" << scale;
  return TestFunction(name.str(), max_order, eval, std::move(norms));
}

TestFunction make_constant(double c, int max_order) {
  auto eval = [c](int k, double) { return k == 0 ? c : 0.0; };
  std::vector<std::optional<double>> norms(max_order + 1, 0.0);
  norms[0] = std::abs(c);
  std::ostringstream name;
  name << "const:" << c;
  TestFunction h(name.str(), max_order, eval, std::move(norms));
  h.mark_constant();
  return h;
}

TestFunction builtin_family(const std::string& name, const std::vector<double>& params) {
  auto need = [&](std::size_t count) {
    if (params.size() != count)
      throw InvalidArgument(name + " expects " + std::to_string(count) + " parameter(s)");
  };
  if (name == "cos" || name == "cosine") {
    need(1);
    return make_cosine(params[0]);
  }
  if (name == "exp" || name == "damped-exponential") {
    need(0);
    return make_damped_exponential();
  }
  if (name == "logistic" || name == "logistic-scaled") {
    need(1);
    return make_logistic(params[0]);
  }
  if (name == "halpha") {
    need(2);
    return make_halpha(params[0], params[1]);
  }
  if (name == "const") {
    need(1);
    return make_constant(params[0]);
  }
  throw InvalidArgument("unknown test function '" + name + "'");
}

TestFunction parse_test_function(const std::string& descriptor) {
  const auto colon = descriptor.find(':');
  const std::string name = descriptor.substr(0, colon);
  std::vector<double> params;
  if (colon != std::string::npos) {
    std::stringstream rest(descriptor.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      try {
        std::size_t used = 0;
        params.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw InvalidArgument("bad parameter '" + item + "' in test function '" + descriptor + "'");
      }
    }
  }
  return builtin_family(name, params);
}

}  // namespace stein_chisq
