#include "stein_chisq/normal_stein.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include <boost/math/interpolators/barycentric_rational.hpp>

#include "stein_chisq/error.hpp"

namespace stein_chisq {

Profile profile_from_table(const DerivativeTable& table) {
  return [&table](int k, double w) {
    if (k == 0) throw InvalidArgument("solution tables carry derivatives only (k >= 1)");
    return table(k, w);
  };
}

Profile interpolated_profile(const DerivativeTable& table, int k_lo, int k_hi, double w_max, double segment,
                             int nodes) {
  if (k_lo < 1 || k_hi > table.max_order() || k_lo > k_hi) throw InvalidArgument("interpolated orders out of range");
  if (!(w_max > 0.0) || !(segment > 0.0) || nodes < 4) throw InvalidArgument("bad interpolation grid");
  using Interp = boost::math::barycentric_rational<double>;
  const int segs = static_cast<int>(std::ceil(w_max / segment));
  auto pieces = std::make_shared<std::vector<std::vector<Interp>>>();
  for (int k = k_lo; k <= k_hi; ++k) {
    std::vector<Interp> row;
    for (int sidx = 0; sidx < segs; ++sidx) {
      const double a = sidx * segment, b = a + segment;
      std::vector<double> x, y;
      // Chebyshev points of the second kind, increasing.
      for (int i = nodes - 1; i >= 0; --i) {
        const double xi = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(std::numbers::pi * i / (nodes - 1));
        x.push_back(xi);
        y.push_back(table(k, xi));
      }
      row.emplace_back(std::move(x), std::move(y), static_cast<std::size_t>(nodes - 1));
    }
    pieces->push_back(std::move(row));
  }
  const double limit = segs * segment;
  return [&table, pieces, k_lo, k_hi, segment, limit](int k, double w) {
    if (k >= k_lo && k <= k_hi && w >= 0.0 && w < limit) {
      const auto idx = static_cast<std::size_t>(w / segment);
      return (*pieces)[static_cast<std::size_t>(k - k_lo)][idx](w);
    }
    return table(k, w);
  };
}

Profile polynomial_profile(std::vector<double> coeffs) {
  return [c = std::move(coeffs)](int k, double w) {
    double sum = 0.0;
    for (std::size_t i = static_cast<std::size_t>(k); i < c.size(); ++i) {
      double falling = 1.0;
      for (int t = 0; t < k; ++t) falling *= static_cast<double>(i) - t;
      sum += c[i] * falling * std::pow(w, static_cast<double>(i) - k);
    }
    return sum;
  };
}

RealFunction g3_from_profile(Profile f) {
  return [f = std::move(f)](double s) {
    const double w = s * s;
    return 3.0 * s * f(2, w) + 2.0 * s * w * f(3, w);
  };
}

RealFunction g4_from_profile(Profile f) {
  return [f = std::move(f)](double s) {
    const double w = s * s;
    return 3.0 * f(2, w) + 12.0 * w * f(3, w) + 4.0 * w * w * f(4, w);
  };
}

double psi_univariate(const RealFunction& g3, double x, double rel_tol) {
  QuadratureOptions q;
  q.rel_tol = rel_tol;
  q.abs_tol = 1e-15;
  q.tail_scale = 1.0 / std::max(1.0, std::abs(x));
  q.breakpoints = {0.5 * q.tail_scale, q.tail_scale, 2.0 * q.tail_scale, 4.0 * q.tail_scale};
  // The total integral of g3 against the normal density vanishes, so the
  // integral from x to infinity can stand in for the one from -infinity.
  if (x >= 0.0) {
    auto g = [&](double u) {
      const double w = std::exp(-x * u - 0.5 * u * u);
      return w == 0.0 ? 0.0 : g3(x + u) * w;
    };
    return -integrate(g, Interval::half_line(0.0), q).value;
  }
  auto g = [&](double u) {
    const double w = std::exp(x * u - 0.5 * u * u);
    return w == 0.0 ? 0.0 : g3(x - u) * w;
  };
  return integrate(g, Interval::half_line(0.0), q).value;
}

PsiValues psi_with_derivatives(const RealFunction& g3, const RealFunction& g4, double x) {
  PsiValues v{};
  v.psi = psi_univariate(g3, x);
  v.dpsi = x * v.psi + g3(x);
  v.d2psi = v.psi + x * v.dpsi + g4(x);
  return v;
}

PsiEnvelope psi_envelope(double f2, double f3, double f4, double x, const BoundConstants& c) {
  const double x2 = x * x, x4 = x2 * x2;
  PsiEnvelope e{};
  e.psi = c.psi_env_psi_f2 * f2 + c.psi_env_psi_f3 * (x2 + c.psi_env_psi_shift) * f3;
  e.x_dpsi = c.psi_env_dpsi_f2 * x2 * f2 + c.psi_env_dpsi_f3 * x2 * (x2 + 1.0) * f3;
  e.d2psi = c.psi_env_d2psi_f2 * (2.0 * x2 + 1.0) * f2 + c.psi_env_d2psi_f3 * (2.0 * x4 + 3.0 * x2 + c.psi_env_d2psi_c) * f3 +
            c.psi_env_d2psi_f4 * x4 * f4;
  return e;
}

ConstrainedGaussian::ConstrainedGaussian(std::vector<double> p) : p_(std::move(p)) {
  check_probability_vector(p_);
  const auto m = static_cast<Eigen::Index>(p_.size());
  sqrt_p_.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) sqrt_p_(i) = std::sqrt(p_[static_cast<std::size_t>(i)]);
  sigma_ = Eigen::MatrixXd::Identity(m, m) - sqrt_p_ * sqrt_p_.transpose();
}

Eigen::VectorXd ConstrainedGaussian::project(const Eigen::VectorXd& v) const {
  return v - sqrt_p_.dot(v) * sqrt_p_;
}

Eigen::VectorXd ConstrainedGaussian::sample(Rng& rng) const {
  Eigen::VectorXd g(sqrt_p_.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = rng.normal();
  return project(g);
}

Eigen::MatrixXd ConstrainedGaussian::sample(std::uint64_t seed, std::size_t count) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(count), sqrt_p_.size());
  for (std::size_t start = 0, chunk = 0; start < count; start += kChunkSize, ++chunk) {
    Rng rng(seed, chunk);
    const std::size_t end = std::min<std::size_t>(count, start + kChunkSize);
    for (std::size_t i = start; i < end; ++i) out.row(static_cast<Eigen::Index>(i)) = sample(rng).transpose();
  }
  return out;
}

ConstrainedGaussian sigma_from_p(const std::vector<double>& p) { return ConstrainedGaussian(p); }

namespace {

inline double delta(int a, int b) { return a == b ? 1.0 : 0.0; }

void check_indices(const Eigen::VectorXd& s, std::initializer_list<int> idx) {
  for (int i : idx)
    if (i < 0 || i >= s.size()) throw InvalidArgument("partial derivative index out of range");
}

}  // namespace

double g_partial(const Profile& f, const Eigen::VectorXd& s, const std::vector<int>& idx) {
  for (int i : idx)
    if (i < 0 || i >= s.size()) throw InvalidArgument("partial derivative index out of range");
  const double w = s.squaredNorm();
  switch (idx.size()) {
    case 1:
      return 0.5 * s(idx[0]) * f(1, w);
    case 2: {
      const int i = idx[0], j = idx[1];
      return 0.5 * delta(i, j) * f(1, w) + s(i) * s(j) * f(2, w);
    }
    case 3: {
      const int i = idx[0], j = idx[1], k = idx[2];
      return (delta(i, j) * s(k) + delta(i, k) * s(j) + delta(j, k) * s(i)) * f(2, w) +
             2.0 * s(i) * s(j) * s(k) * f(3, w);
    }
    case 4: {
      const int i = idx[0], j = idx[1], k = idx[2], l = idx[3];
      const double d2 = delta(i, j) * delta(k, l) + delta(i, k) * delta(j, l) + delta(j, k) * delta(i, l);
      const double d3 = (delta(i, j) * s(k) + delta(i, k) * s(j) + delta(j, k) * s(i)) * s(l) +
                        delta(i, l) * s(j) * s(k) + delta(j, l) * s(i) * s(k) + delta(k, l) * s(i) * s(j);
      return d2 * f(2, w) + 2.0 * d3 * f(3, w) + 4.0 * s(i) * s(j) * s(k) * s(l) * f(4, w);
    }
    default:
      throw InvalidArgument("g partials are available for orders 1..4");
  }
}

double mvn_operator_apply(const Profile& f, const ConstrainedGaussian& model, const Eigen::VectorXd& s) {
  const int m = model.dim();
  if (s.size() != m) throw InvalidArgument("point dimension does not match the model");
  Eigen::VectorXd grad(m);
  Eigen::MatrixXd hess(m, m);
  for (int i = 0; i < m; ++i) {
    grad(i) = g_partial(f, s, {i});
    for (int j = 0; j < m; ++j) hess(i, j) = g_partial(f, s, {i, j});
  }
  return model.sigma().cwiseProduct(hess).sum() - s.dot(grad);
}

double chisq_operator_apply(const Profile& f, int m, double w) {
  return w * f(2, w) + 0.5 * (m - 1 - w) * f(1, w);
}

OperatorComparison operator_comparison(const Profile& f, const ConstrainedGaussian& model, const Eigen::VectorXd& s) {
  if (s.size() != model.dim()) throw InvalidArgument("point dimension does not match the model");
  if (std::abs(model.sqrt_p().dot(s)) > 1e-12 * std::max(1.0, s.norm()))
    throw InvalidArgument("point is off the constraint surface sum sqrt(p_j) s_j = 0");
  return {mvn_operator_apply(f, model, s), chisq_operator_apply(f, model.dim(), s.squaredNorm())};
}

double h_third_partial(HKind which, const Profile& f, std::array<int, 3> abc, int j, const Eigen::VectorXd& s) {
  const auto [a, b, c] = abc;
  check_indices(s, {a, b, c, j});
  const double w = s.squaredNorm();
  const double sa = s(a), sb = s(b), sc = s(c), sj = s(j);
  const double pair_d = delta(j, a) * delta(b, c) + delta(j, b) * delta(a, c) + delta(j, c) * delta(a, b);
  const double j_ss = delta(j, a) * sb * sc + delta(j, b) * sa * sc + delta(j, c) * sa * sb;
  const double ab_s = delta(a, b) * sc + delta(a, c) * sb + delta(b, c) * sa;
  if (which == HKind::h1) {
    return 2.0 * pair_d * f(3, w) + (4.0 * j_ss + 4.0 * sj * ab_s) * f(4, w) + 8.0 * sa * sb * sc * sj * f(5, w);
  }
  const double triple = delta(j, a) * delta(j, b) * delta(j, c);
  const double jj_s = sc * delta(j, a) * delta(j, b) + sb * delta(j, a) * delta(j, c) + sa * delta(j, b) * delta(j, c);
  const double sj2 = sj * sj, sj3 = sj2 * sj;
  return 6.0 * triple * f(3, w) + (12.0 * sj * jj_s + 6.0 * sj2 * pair_d) * f(4, w) +
         (12.0 * sj2 * j_ss + 4.0 * sj3 * ab_s) * f(5, w) + 8.0 * sa * sb * sc * sj3 * f(6, w);
}

double third_partial_envelope(HKind which, const NormBundle& fn, const Eigen::VectorXd& s, std::array<int, 3> abc, int j,
                     const BoundConstants& c) {
  const auto [a, b, cc] = abc;
  check_indices(s, {a, b, cc, j});
  auto pw = [&](int i, int e) { return std::pow(s(i), e); };
  if (which == HKind::h1) {
    const double sq = pw(a, 2) + pw(b, 2) + pw(cc, 2) + pw(j, 2);
    const double qu = pw(a, 4) + pw(b, 4) + pw(cc, 4) + pw(j, 4);
    return c.mvn3_h1_f3 * fn.at(3) + c.mvn3_h1_f4 * fn.at(4) * (c.mvn3_h1_f4c + c.mvn3_h1_f4s * sq) +
           c.mvn3_h1_f5 * fn.at(5) * (c.mvn3_h1_f5c + c.mvn3_h1_f5s * qu);
  }
  const double sq = pw(a, 2) + pw(b, 2) + pw(cc, 2);
  const double qu = pw(a, 4) + pw(b, 4) + pw(cc, 4);
  const double sx = pw(a, 6) + pw(b, 6) + pw(cc, 6);
  return c.mvn3_h2_f3 * fn.at(3) + c.mvn3_h2_f4 * fn.at(4) * (c.mvn3_h2_f4c + sq + c.mvn3_h2_f4j * pw(j, 2)) +
         c.mvn3_h2_f5 * fn.at(5) * (c.mvn3_h2_f5c + c.mvn3_h2_f5s * qu + c.mvn3_h2_f5j * pw(j, 4)) +
         fn.at(6) * (c.mvn3_h2_f6c + c.mvn3_h2_f6 * (sx + c.mvn3_h2_f6j * pw(j, 6)));
}

Estimate mvn_third_derivative_estimate(HKind which, const Profile& f, std::array<int, 3> abc, int j,
                                       const Eigen::VectorXd& s, const ConstrainedGaussian& model,
                                       std::size_t u_nodes, std::size_t mc_budget, std::uint64_t seed) {
  if (mc_budget < 2) throw BudgetExceeded("Monte Carlo budget must allow at least two draws");
  if (s.size() != model.dim()) throw InvalidArgument("point dimension does not match the model");
  const QuadratureRule rule = gauss_legendre(u_nodes, 0.0, 1.0);
  NeumaierSum sum, sum_sq;
  for (std::size_t start = 0, chunk = 0; start < mc_budget; start += kChunkSize, ++chunk) {
    Rng rng(seed, chunk);
    const std::size_t end = std::min<std::size_t>(mc_budget, start + kChunkSize);
    for (std::size_t i = start; i < end; ++i) {
      const Eigen::VectorXd z = model.sample(rng);
      double y = 0.0;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double t = rule.nodes[q];
        const Eigen::VectorXd x = t * s + std::sqrt(1.0 - t * t) * z;
        y -= rule.weights[q] * t * t * h_third_partial(which, f, abc, j, x);
      }
      sum += y;
      sum_sq += y * y;
    }
  }
  const double n = static_cast<double>(mc_budget);
  const double mean = sum.value() / n;
  const double var = std::max(0.0, (sum_sq.value() - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n), mc_budget};
}

double u_weight_moment(std::size_t u_nodes, int k) {
  const QuadratureRule rule = gauss_legendre(u_nodes, 0.0, 1.0);
  NeumaierSum sum;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double t = rule.nodes[q];
    sum += rule.weights[q] * t * t * std::pow(1.0 - t * t, k);
  }
  return sum.value();
}

}  // namespace stein_chisq
