#include <cmath>

#include <gtest/gtest.h>

#include "stein_chisq/error.hpp"
#include "stein_chisq/normal_stein.hpp"

namespace sc = stein_chisq;

TEST(Psi, QuadraticProfile) {
  // f = w^2: g3 = 6s and psi = -6 everywhere
  const auto f = sc::polynomial_profile({0, 0, 1});
  const auto g3 = sc::g3_from_profile(f);
  const auto g4 = sc::g4_from_profile(f);
  for (double x : {-4.0, -1.0, 0.0, 0.5, 3.0}) {
    EXPECT_NEAR(g3(x), 6 * x, 1e-14);
    EXPECT_NEAR(sc::psi_univariate(g3, x), -6.0, 1e-10) << x;
    const auto v = sc::psi_with_derivatives(g3, g4, x);
    EXPECT_NEAR(v.dpsi, 0.0, 1e-9) << x;
    EXPECT_NEAR(v.d2psi, 0.0, 1e-9) << x;
    EXPECT_LE(std::abs(v.psi), sc::psi_envelope(2.0, 0.0, 0.0, x).psi * (1 + 1e-9));
  }
}

TEST(Psi, CubicProfile) {
  // f = w^3: g3 = 30 s^3 and psi = -30 x^2 - 60
  const auto f = sc::polynomial_profile({0, 0, 0, 1});
  const auto g3 = sc::g3_from_profile(f);
  const auto g4 = sc::g4_from_profile(f);
  for (double x : {-2.5, -0.3, 0.0, 1.0, 2.0}) {
    EXPECT_NEAR(g3(x), 30 * x * x * x, 1e-12);
    const auto v = sc::psi_with_derivatives(g3, g4, x);
    EXPECT_NEAR(v.psi, -30 * x * x - 60, 1e-8 * (60 + 30 * x * x)) << x;
    EXPECT_NEAR(v.dpsi, -60 * x, 1e-8 * 60 * (1 + std::abs(x))) << x;
    EXPECT_NEAR(v.d2psi, -60.0, 1e-7) << x;
  }
}

TEST(PsiEnvelope, EnvelopeFormula) {
  const auto e = sc::psi_envelope(1.0, 1.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(e.psi, 3 + 2 * 3);
  EXPECT_DOUBLE_EQ(e.x_dpsi, 6 + 4 * 2);
  EXPECT_DOUBLE_EQ(e.d2psi, 6 * 3 + 2 * (2 + 3 + 8) + 4);
}

TEST(Profile, PolynomialDerivatives) {
  const auto f = sc::polynomial_profile({1, 2, 3});
  EXPECT_DOUBLE_EQ(f(0, 2.0), 1 + 4 + 12);
  EXPECT_DOUBLE_EQ(f(1, 2.0), 2 + 12);
  EXPECT_DOUBLE_EQ(f(2, 2.0), 6);
  EXPECT_DOUBLE_EQ(f(3, 2.0), 0);
}

TEST(Profile, InterpolatedMatchesTable) {
  const sc::DerivativeTable t(sc::make_cosine(1.0), sc::GammaParams::chi_square(2.0), 4);
  const auto fast = sc::interpolated_profile(t, 1, 3, 16.0);
  for (double w : {0.0, 0.37, 3.3, 9.99, 15.9, 20.0})
    for (int k = 1; k <= 3; ++k) EXPECT_NEAR(fast(k, w), t(k, w), 1e-9) << k << " " << w;
}

TEST(GPartial, ClosedForms) {
  // f = w^3: g = w^3 / 4
  const auto f = sc::polynomial_profile({0, 0, 0, 1});
  Eigen::VectorXd s(3);
  s << 0.3, -0.7, 1.1;
  const double w = s.squaredNorm();
  EXPECT_NEAR(sc::g_partial(f, s, {0}), 1.5 * w * w * s(0), 1e-13);
  EXPECT_NEAR(sc::g_partial(f, s, {0, 1}), 6 * w * s(0) * s(1), 1e-13);
  EXPECT_NEAR(sc::g_partial(f, s, {1, 1}), 1.5 * w * w + 6 * w * s(1) * s(1), 1e-12);
  EXPECT_NEAR(sc::g_partial(f, s, {0, 1, 2}), 12 * s(0) * s(1) * s(2), 1e-12);
  EXPECT_THROW(sc::g_partial(f, s, {}), sc::InvalidArgument);
  EXPECT_THROW(sc::g_partial(f, s, {0, 1, 2, 0, 1}), sc::InvalidArgument);
}

TEST(GPartial, FiniteDifferenceOfLowerOrder) {
  const auto f = sc::polynomial_profile({0.5, -1, 0.25, 0.1, -0.02});
  Eigen::VectorXd s(3);
  s << 0.4, 0.2, -0.9;
  const double h = 1e-4;
  const std::vector<std::vector<int>> orders{{0}, {0, 2}, {1, 1, 2}};
  for (const auto& idx : orders)
    for (int dir = 0; dir < 3; ++dir) {
      Eigen::VectorXd up = s, dn = s;
      up(dir) += h;
      dn(dir) -= h;
      auto longer = idx;
      longer.push_back(dir);
      const double fd = (sc::g_partial(f, up, idx) - sc::g_partial(f, dn, idx)) / (2 * h);
      EXPECT_NEAR(fd, sc::g_partial(f, s, longer), 1e-6) << idx.size() << " " << dir;
    }
}

TEST(HThirdPartial, CubicProfileClosedForm) {
  // f = w^3: h1 = 6 s_j w has constant third partials; h2 = 6 s_j^3
  const auto f = sc::polynomial_profile({0, 0, 0, 1});
  Eigen::VectorXd s(3);
  s << 0.2, -0.5, 0.8;
  EXPECT_NEAR(sc::h_third_partial(sc::HKind::h1, f, {0, 0, 0}, 0, s), 36.0, 1e-12);
  EXPECT_NEAR(sc::h_third_partial(sc::HKind::h1, f, {0, 1, 1}, 0, s), 12.0, 1e-12);
  EXPECT_NEAR(sc::h_third_partial(sc::HKind::h1, f, {0, 1, 2}, 0, s), 0.0, 1e-12);
  EXPECT_NEAR(sc::h_third_partial(sc::HKind::h2, f, {1, 1, 1}, 1, s), 36.0, 1e-12);
  EXPECT_NEAR(sc::h_third_partial(sc::HKind::h2, f, {1, 1, 2}, 1, s), 0.0, 1e-12);
}

TEST(HThirdPartial, FiniteDifference) {
  const auto f = sc::polynomial_profile({0, 0.3, -0.2, 0.1, 0.05, -0.01});
  Eigen::VectorXd s(3);
  s << 0.6, -0.4, 0.3;
  auto h = [&](sc::HKind which, int j, const Eigen::VectorXd& x) {
    const double w = x.squaredNorm();
    return which == sc::HKind::h1 ? x(j) * f(2, w) : std::pow(x(j), 3) * f(3, w);
  };
  const double d = 1e-3;
  for (auto which : {sc::HKind::h1, sc::HKind::h2})
    for (std::array<int, 3> abc : {std::array{0, 0, 0}, std::array{0, 1, 2}, std::array{1, 1, 2}}) {
      double fd = 0.0;
      for (int sa : {-1, 1})
        for (int sb : {-1, 1})
          for (int sc_ : {-1, 1}) {
            Eigen::VectorXd x = s;
            x(abc[0]) += sa * d;
            x(abc[1]) += sb * d;
            x(abc[2]) += sc_ * d;
            fd += sa * sb * sc_ * h(which, 0, x);
          }
      fd /= 8 * d * d * d;
      const double exact = sc::h_third_partial(which, f, abc, 0, s);
      EXPECT_NEAR(fd, exact, 1e-4 * std::max(1.0, std::abs(exact))) << abc[0] << abc[1] << abc[2];
    }
}

TEST(ConstrainedGaussian, ProjectionAndCovariance) {
  const sc::ConstrainedGaussian g({0.2, 0.3, 0.5});
  EXPECT_EQ(g.dim(), 3);
  EXPECT_NEAR((g.sigma() * g.sqrt_p()).norm(), 0.0, 1e-15);
  Eigen::VectorXd v(3);
  v << 1.0, 2.0, -0.5;
  const auto pv = g.project(v);
  EXPECT_NEAR(pv.dot(g.sqrt_p()), 0.0, 1e-15);
  EXPECT_NEAR((g.project(pv) - pv).norm(), 0.0, 1e-15);

  const std::size_t n = 100000;
  const Eigen::MatrixXd z = g.sample(5, n);
  EXPECT_NEAR((z * g.sqrt_p()).cwiseAbs().maxCoeff(), 0.0, 1e-12);
  const Eigen::MatrixXd cov = z.transpose() * z / static_cast<double>(n);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      // Var(Z_i Z_j) <= 2 for unit-variance Gaussians
      EXPECT_NEAR(cov(i, j), g.sigma()(i, j), 4 * std::sqrt(2.0 / n)) << i << j;
    }
  EXPECT_EQ(g.sample(5, 10), g.sample(5, 10));
  EXPECT_THROW(sc::ConstrainedGaussian({0.5, 0.6}), sc::InvalidArgument);
}

TEST(Operators, AgreeOnHyperplane) {
  const auto model = sc::sigma_from_p({0.1, 0.2, 0.3, 0.4});
  const auto f = sc::polynomial_profile({0, 1, -0.5, 0.2});
  Eigen::VectorXd v(4);
  v << 0.3, -1.2, 0.8, 0.1;
  const auto s = model.project(v);
  const auto cmp = sc::operator_comparison(f, model, s);
  EXPECT_NEAR(cmp.mvn, cmp.chisq, 1e-12);
  EXPECT_NEAR(cmp.chisq, sc::chisq_operator_apply(f, 4, s.squaredNorm()), 1e-15);
  EXPECT_THROW(sc::operator_comparison(f, model, v), sc::InvalidArgument);
}

TEST(UWeight, ClosedForms) {
  // int_0^1 t^2 (1 - t^2)^k dt
  EXPECT_NEAR(sc::u_weight_moment(6, 0), 1.0 / 3, 1e-15);
  EXPECT_NEAR(sc::u_weight_moment(6, 1), 2.0 / 15, 1e-15);
  EXPECT_NEAR(sc::u_weight_moment(6, 2), 8.0 / 105, 1e-15);
}

TEST(MvnThirdDerivative, ConstantIntegrand) {
  // third partial of h1 for f = w^3 is 36 at (0,0,0), so d^3 psi = -36/3
  const auto model = sc::sigma_from_p({1.0 / 3, 1.0 / 3, 1.0 / 3});
  const auto f = sc::polynomial_profile({0, 0, 0, 1});
  Eigen::VectorXd s = Eigen::VectorXd::Zero(3);
  const auto est = sc::mvn_third_derivative_estimate(sc::HKind::h1, f, {0, 0, 0}, 0, s, model, 6, 2000, 3);
  EXPECT_NEAR(est.value, -12.0, 1e-12);
  EXPECT_NEAR(est.se, 0.0, 1e-12);
}
