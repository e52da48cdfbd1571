#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "stein_chisq/distances.hpp"
#include "stein_chisq/error.hpp"
#include "stein_chisq/gamma_stein.hpp"
#include "stein_chisq/numerics.hpp"

namespace sc = stein_chisq;

TEST(Kolmogorov, FourTrialsByHand) {
  // W = (U - 2)^2 with atoms 0: 6/16, 1: 8/16, 4: 2/16
  const auto law = sc::pearson_law(sc::MultinomialModel(4, {0.5, 0.5}));
  ASSERT_EQ(law.x.size(), 3u);
  EXPECT_NEAR(law.prob[0], 6.0 / 16, 1e-15);
  EXPECT_NEAR(law.prob[1], 8.0 / 16, 1e-15);
  EXPECT_NEAR(law.prob[2], 2.0 / 16, 1e-15);
  auto F = [](double z) { return std::erf(std::sqrt(z / 2)); };
  const double ref = std::max({6.0 / 16, F(1.0) - 6.0 / 16, 14.0 / 16 - F(1.0), F(4.0) - 14.0 / 16, 1 - F(4.0)});
  EXPECT_NEAR(sc::kolmogorov_from_atoms(law, 1.0), ref, 1e-12);
  const auto est = sc::kolmogorov_distance(sc::MultinomialModel(4, {0.5, 0.5}), sc::DistanceMode::exact, 1e7, 1);
  EXPECT_NEAR(est.value, 0.375, 1e-12);
  EXPECT_EQ(est.se, 0.0);
}

TEST(Kolmogorov, MonteCarloNearExact) {
  const sc::MultinomialModel model(30, {0.2, 0.3, 0.5});
  const double exact = sc::kolmogorov_distance(model, sc::DistanceMode::exact, 1e7, 1).value;
  const auto mc = sc::kolmogorov_distance(model, sc::DistanceMode::mc, 200000, 1);
  EXPECT_NEAR(mc.se, std::sqrt(std::log(2.0) / 400000), 1e-15);
  EXPECT_NEAR(mc.value, exact, 4 * mc.se);
  EXPECT_LE(mc.value, 1.0);
}

TEST(Smooth, ConstantFunctionIsZero) {
  const auto d = sc::smooth_distance_pearson(sc::MultinomialModel(12, {0.3, 0.7}), sc::make_constant(2.0),
                                             sc::DistanceMode::exact, 1e7, 1);
  EXPECT_NEAR(d.value, 0.0, 1e-13);
}

TEST(Smooth, ExactMatchesMonteCarlo) {
  const sc::MultinomialModel model(50, {0.5, 0.5});
  const auto h = sc::make_cosine(1.0);
  const auto ex = sc::smooth_distance_pearson(model, h, sc::DistanceMode::exact, 1e7, 1);
  const auto mc = sc::smooth_distance_pearson(model, h, sc::DistanceMode::mc, 1e6, 2);
  EXPECT_GT(mc.se, 0.0);
  EXPECT_NEAR(mc.expectation, ex.expectation, 3.5 * mc.se);
  EXPECT_NEAR(ex.reference, sc::gamma_expectation(h, sc::GammaParams::chi_square(1.0)), 1e-13);
  EXPECT_NEAR(ex.value, std::abs(ex.expectation - ex.reference), 1e-15);
}

TEST(Smooth, LawFromAtomsByHand) {
  sc::WeightedAtoms law{{0.0, 2.0}, {0.5, 0.5}};
  const auto d = sc::smooth_distance_from_law(law, sc::make_damped_exponential(), 2.0);
  // E e^{-Y} for chi-square(2) is 1/3
  EXPECT_NEAR(d.value, std::abs(0.5 + 0.5 * std::exp(-2.0) - 1.0 / 3), 1e-13);
}

TEST(SquaredClt, SmallLaws) {
  // d = 1, n = 2 Rademacher: W = (X1 + X2)^2 / 2 is 0 or 2 with equal mass
  const auto law = sc::squared_clt_law(sc::IidLaw::rademacher, 2, 1);
  ASSERT_EQ(law.x.size(), 2u);
  EXPECT_NEAR(law.x[1], 2.0, 1e-15);
  EXPECT_NEAR(law.prob[0], 0.5, 1e-15);
  // d = 2, n = 1: W = X1^2 + X2^2 = 2
  const auto law2 = sc::squared_clt_law(sc::IidLaw::rademacher, 1, 2);
  ASSERT_EQ(law2.x.size(), 1u);
  EXPECT_NEAR(law2.x[0], 2.0, 1e-15);
  double mean = 0.0;
  const auto law3 = sc::squared_clt_law(sc::IidLaw::shifted, 7, 1);
  for (std::size_t i = 0; i < law3.x.size(); ++i) mean += law3.x[i] * law3.prob[i];
  EXPECT_NEAR(mean, 1.0, 1e-13);
  EXPECT_THROW(sc::squared_clt_law(sc::IidLaw::shifted, 5, 2), sc::InvalidArgument);
}

TEST(SquaredClt, MonteCarloNearExact) {
  const auto h = sc::make_cosine(1.0);
  const auto ex = sc::smooth_distance_squared_clt(sc::IidLaw::uniform_discrete, 20, 1, h, sc::DistanceMode::exact,
                                                  1e7, 1);
  const auto mc = sc::smooth_distance_squared_clt(sc::IidLaw::uniform_discrete, 20, 1, h, sc::DistanceMode::mc,
                                                  1e6, 3);
  EXPECT_NEAR(mc.expectation, ex.expectation, 3.5 * mc.se);
}

TEST(Wasserstein, MatchesDirectIntegral) {
  const auto law = sc::pearson_law(sc::MultinomialModel(6, {0.4, 0.6}));
  auto gap = [&](double z) {
    double F = 0.0;
    for (std::size_t i = 0; i < law.x.size(); ++i)
      if (law.x[i] <= z) F += law.prob[i];
    return std::abs(F - sc::chi_square_cdf(1.0, z));
  };
  sc::QuadratureOptions o;
  o.breakpoints = law.x;
  o.max_intervals = 20000;
  const double ref = sc::integrate(gap, sc::Interval::half_line(), o).value;
  EXPECT_NEAR(sc::wasserstein_from_atoms(law, 1.0), ref, 1e-8);
}

TEST(Atoms, MergeTies) {
  const auto a = sc::merge_atoms({{2.0, 0.25}, {1.0, 0.25}, {2.0 * (1 + 1e-14), 0.5}});
  ASSERT_EQ(a.x.size(), 2u);
  EXPECT_EQ(a.x[0], 1.0);
  EXPECT_NEAR(a.prob[1], 0.75, 1e-15);
}

TEST(RademacherAtom, Values) {
  const auto two = sc::rademacher_atom_check(2);
  EXPECT_NEAR(two.exact, 0.5, 1e-15);
  EXPECT_NEAR(two.approx, 1 / std::sqrt(std::numbers::pi), 1e-15);
  EXPECT_NEAR(two.ratio, 0.8862, 1e-4);
  const auto hundred = sc::rademacher_atom_check(100);
  EXPECT_GE(hundred.ratio, 0.995);
  EXPECT_LE(hundred.ratio, 1.0);
  EXPECT_THROW(sc::rademacher_atom_check(7), sc::InvalidArgument);
}

TEST(RateSlope, SyntheticAndAtoms) {
  std::vector<std::pair<double, double>> pts, atoms;
  for (double n : {10.0, 20.0, 40.0, 80.0}) pts.emplace_back(n, 3.0 / n);
  EXPECT_NEAR(sc::rate_slope(pts).slope, -1.0, 1e-12);
  for (int n = 16; n <= 1024; n *= 2) atoms.emplace_back(n, sc::rademacher_atom_check(n).exact);
  EXPECT_NEAR(sc::rate_slope(atoms).slope, -0.5, 0.02);
  EXPECT_THROW(sc::rate_slope({{1, 1}, {2, 0}, {3, 1}}), sc::InvalidArgument);
  EXPECT_THROW(sc::rate_slope({{1, 1}, {2, 1}}), sc::InvalidArgument);
}

TEST(Determinism, SameSeedSameDraws) {
  const sc::MultinomialModel model(40, {0.2, 0.3, 0.5});
  EXPECT_EQ(sc::sample_pearson(model, 1000, 8), sc::sample_pearson(model, 1000, 8));
  EXPECT_NE(sc::sample_pearson(model, 1000, 8), sc::sample_pearson(model, 1000, 9));
  EXPECT_EQ(sc::sample_squared_clt(sc::IidLaw::rademacher, 30, 2, 500, 4),
            sc::sample_squared_clt(sc::IidLaw::rademacher, 30, 2, 500, 4));
}

TEST(Modes, Parse) {
  EXPECT_EQ(sc::parse_distance_mode("mc"), sc::DistanceMode::mc);
  EXPECT_EQ(sc::to_string(sc::DistanceMode::exact), "exact");
  EXPECT_THROW(sc::parse_distance_mode("fast"), sc::InvalidArgument);
}
