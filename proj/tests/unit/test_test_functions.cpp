#include <cmath>

#include <gtest/gtest.h>

#include "stein_chisq/error.hpp"
#include "stein_chisq/test_functions.hpp"

namespace sc = stein_chisq;

namespace {

double central_difference(const sc::TestFunction& h, int k, double x, double step = 1e-5) {
  return (h(k, x + step) - h(k, x - step)) / (2 * step);
}

}  // namespace

TEST(Halpha, PiecewiseValues) {
  const auto h = sc::make_halpha(1.0, 0.5);
  EXPECT_EQ(h.value(0.2), 1.0);
  EXPECT_EQ(h.value(1.0), 1.0);
  // 1 - 2 d^2 / alpha^2 with d = 0.1
  EXPECT_NEAR(h.value(1.1), 1.0 - 2 * 0.01 / 0.25, 1e-15);
  EXPECT_NEAR(h.value(1.25), 0.5, 1e-15);
  // 2 (x - end)^2 / alpha^2 with x - end = -0.1
  EXPECT_NEAR(h.value(1.4), 2 * 0.01 / 0.25, 1e-15);
  EXPECT_EQ(h.value(1.5), 0.0);
  EXPECT_EQ(h.value(7.0), 0.0);
  ASSERT_TRUE(h.support_end().has_value());
  EXPECT_DOUBLE_EQ(*h.support_end(), 1.5);
  EXPECT_EQ(h.knots().size(), 3u);
}

TEST(Halpha, DerivativesMatchFiniteDifferences) {
  const auto h = sc::make_halpha(2.0, 0.8);
  for (double x : {1.0, 2.1, 2.3, 2.5, 2.7, 3.5})
    for (int k = 0; k < 2; ++k) EXPECT_NEAR(central_difference(h, k, x), h(k + 1, x), 1e-8) << k << " " << x;
}

TEST(Halpha, CertifiedNorms) {
  const auto h = sc::make_halpha(1.0, 0.25);
  EXPECT_DOUBLE_EQ(h.certified_norms().at(0), 1.0);
  EXPECT_DOUBLE_EQ(h.certified_norms().at(1), 8.0);
  EXPECT_DOUBLE_EQ(h.certified_norms().at(2), 64.0);
  EXPECT_FALSE(h.certified_norms().has(3));
  EXPECT_THROW(h.certified_norms().at(3), sc::MissingNorm);
  // attained just before the midpoint
  EXPECT_NEAR(std::abs(h(1, 1.125)), 8.0, 1e-12);
}

TEST(Cosine, DerivativeCycle) {
  const auto h = sc::make_cosine(2.0, 6);
  const double x = 0.37;
  EXPECT_NEAR(h(0, x), std::cos(2 * x), 1e-15);
  EXPECT_NEAR(h(1, x), -2 * std::sin(2 * x), 1e-15);
  EXPECT_NEAR(h(2, x), -4 * std::cos(2 * x), 1e-14);
  EXPECT_NEAR(h(3, x), 8 * std::sin(2 * x), 1e-14);
  EXPECT_NEAR(h(4, x), 16 * std::cos(2 * x), 1e-13);
  for (int k = 0; k <= 6; ++k) EXPECT_DOUBLE_EQ(h.certified_norms().at(k), std::pow(2.0, k));
  for (int k = 0; k < 6; ++k) EXPECT_NEAR(central_difference(h, k, 1.3, 1e-4), h(k + 1, 1.3), 1e-5 * std::pow(2.0, k + 3));
}

TEST(DampedExponential, AllNormsOne) {
  const auto h = sc::make_damped_exponential(5);
  for (int k = 0; k <= 5; ++k) {
    EXPECT_DOUBLE_EQ(h.certified_norms().at(k), 1.0);
    EXPECT_NEAR(h(k, 0.0), (k % 2 ? -1.0 : 1.0), 1e-15);
  }
}

TEST(Logistic, NormsFromClosedForms) {
  const double s = 0.5;
  const auto h = sc::make_logistic(s, 4);
  EXPECT_DOUBLE_EQ(h.certified_norms().at(0), 1.0);
  EXPECT_NEAR(h.certified_norms().at(1), 1.0 / (4 * s), 1e-12);
  // max of u(1-u)(1-2u) over [1/2, 1] is sqrt(3)/18
  EXPECT_NEAR(h.certified_norms().at(2), std::sqrt(3.0) / 18 / (s * s), 1e-10);
  for (double x : {0.1, 0.8, 2.0})
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(central_difference(h, k, x), h(k + 1, x), 1e-6) << k << " " << x;
}

TEST(Logistic, NormsDominateDenseGrid) {
  const auto h = sc::make_logistic(1.3, 5);
  for (int k = 1; k <= 5; ++k) {
    double sup = 0.0;
    for (int i = 0; i <= 20000; ++i) sup = std::max(sup, std::abs(h(k, i * 1e-3)));
    EXPECT_LE(sup, h.certified_norms().at(k) * (1 + 1e-12)) << k;
    EXPECT_GE(sup, h.certified_norms().at(k) * (1 - 1e-4)) << k;
  }
}

TEST(Constant, FlaggedConstant) {
  const auto h = sc::make_constant(-2.0);
  EXPECT_TRUE(h.constant());
  EXPECT_EQ(h.value(3.0), -2.0);
  EXPECT_EQ(h(2, 3.0), 0.0);
  EXPECT_DOUBLE_EQ(h.certified_norms().at(0), 2.0);
}

TEST(Parse, Descriptors) {
  EXPECT_EQ(sc::parse_test_function("cos:1.5").max_order(), 8);
  EXPECT_NEAR(sc::parse_test_function("cos:1.5").value(1.0), std::cos(1.5), 1e-15);
  EXPECT_EQ(sc::parse_test_function("halpha:2,0.5").max_order(), 2);
  EXPECT_NEAR(sc::parse_test_function("exp").value(1.0), std::exp(-1.0), 1e-15);
  EXPECT_TRUE(sc::parse_test_function("const:3").constant());
  EXPECT_THROW(sc::parse_test_function("sinc:1"), sc::InvalidArgument);
  EXPECT_THROW(sc::parse_test_function("cos:abc"), sc::InvalidArgument);
  EXPECT_THROW(sc::parse_test_function("halpha:1"), sc::InvalidArgument);
  EXPECT_THROW(sc::parse_test_function("halpha:1,-1"), sc::InvalidArgument);
}

TEST(NormBundle, ScalingAndValidation) {
  const auto b = sc::NormBundle::from_values({1.0, 2.0}).scaled(3.0);
  EXPECT_DOUBLE_EQ(b.at(1), 6.0);
  EXPECT_THROW(sc::NormBundle::from_values({-1.0}), sc::InvalidArgument);
  sc::NormBundle c;
  c.set(3, 1.5);
  EXPECT_TRUE(c.has(3));
  EXPECT_FALSE(c.has(1));
  EXPECT_EQ(c.size(), 4);
}
