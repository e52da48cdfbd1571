#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "stein_chisq/bounds.hpp"
#include "stein_chisq/error.hpp"

namespace sc = stein_chisq;

namespace {

sc::NormBundle unit_norms(int count) { return sc::NormBundle::from_values(std::vector<double>(count, 1.0)); }

}  // namespace

TEST(SquaredClt, RademacherArithmetic) {
  const auto norms = sc::NormBundle::from_values({0.5, 1.0, 2.0, 0.25});
  const auto r = sc::bound_squared_clt(norms, sc::law_moments(sc::IidLaw::rademacher), 50, 1);
  EXPECT_NEAR(r.value, 4.0 / (3 * 50) * (2 * 0.5 + 38 * 1.0 + 203 * 2.0 + 321 * 0.25), 1e-12);
  EXPECT_TRUE(r.hypotheses_ok());
}

TEST(SquaredClt, AlphasAndDimension) {
  const auto a = sc::squared_clt_alphas(1.0);
  EXPECT_DOUBLE_EQ(a[0], 71.0);
  EXPECT_DOUBLE_EQ(a[1], 692.0);
  EXPECT_DOUBLE_EQ(a[2], 1984.0);
  EXPECT_DOUBLE_EQ(a[3], 1641.0);
  const auto mb = sc::law_moments(sc::IidLaw::rademacher);
  const double d1 = sc::bound_squared_clt(unit_norms(4), mb, 10, 1).value;
  const double d5 = sc::bound_squared_clt(unit_norms(4), mb, 10, 5).value;
  EXPECT_NEAR(d5 / d1, (5.0 / 7) / (1.0 / 3), 1e-14);
  const double big = sc::bound_squared_clt(unit_norms(4), mb, 10, 1000000).value;
  EXPECT_NEAR(big, 4.0 / 10 * 564, 1e-3);
  EXPECT_THROW(sc::bound_squared_clt(sc::NormBundle::from_values({1, 1}), mb, 10, 1), sc::MissingNorm);
}

TEST(Pearson, WorkedValues) {
  const sc::MultinomialModel half100(100, {0.5, 0.5});
  EXPECT_NEAR(sc::bound_pearson_smooth(unit_norms(3), half100, sc::PearsonVariant::sqrt).value,
              0.4 * 136 * 2 * std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(sc::bound_pearson_smooth(unit_norms(3), half100, sc::PearsonVariant::sqrt).value, 153.87, 5e-3);
  const sc::MultinomialModel half6(1000000, {0.5, 0.5});
  const double n1 = sc::bound_pearson_smooth(unit_norms(6), half6, sc::PearsonVariant::n1).value;
  EXPECT_NEAR(n1, 4.0 / 3e6 * 8 * 417552, 1e-10);
  EXPECT_NEAR(n1, 4.4539, 1e-4);
}

TEST(Pearson, UniformRoutesAgree) {
  for (int m : {2, 3, 7}) {
    const sc::MultinomialModel model(500, std::vector<double>(m, 1.0 / m));
    EXPECT_NEAR(sc::sum_inv_sqrt(model.p()), m * std::sqrt(double(m)), 1e-12);
    // sum p^{-1/2} = m / sqrt(p*) for uniform p
    const double direct = 12.0 / std::sqrt(500.0 / m) * 136;
    EXPECT_NEAR(sc::bound_pearson_smooth(unit_norms(3), model, sc::PearsonVariant::sqrt_pstar).value, direct, 1e-9);
  }
}

TEST(Pearson, FlagsAndMissingNorms) {
  const sc::MultinomialModel sparse(5, {0.1, 0.9});
  const auto r = sc::bound_pearson_smooth(unit_norms(3), sparse, sc::PearsonVariant::sqrt);
  EXPECT_FALSE(r.hypotheses_ok());
  EXPECT_GT(r.value, 0.0);
  EXPECT_THROW(sc::bound_pearson_smooth(unit_norms(3), sparse, sc::PearsonVariant::n1), sc::MissingNorm);
  EXPECT_EQ(sc::parse_pearson_variant("n1-pstar"), sc::PearsonVariant::n1_pstar);
  EXPECT_THROW(sc::parse_pearson_variant("n2"), sc::InvalidArgument);
}

TEST(Pearson, MonotoneAndLinear) {
  const std::vector<double> p{0.2, 0.3, 0.5};
  for (auto v : {sc::PearsonVariant::n1, sc::PearsonVariant::sqrt, sc::PearsonVariant::n1_pstar,
                 sc::PearsonVariant::sqrt_pstar}) {
    double prev = INFINITY;
    for (int n : {10, 20, 80, 1000}) {
      const double b = sc::bound_pearson_smooth(unit_norms(6), sc::MultinomialModel(n, p), v).value;
      EXPECT_GE(b, 0.0);
      EXPECT_LT(b, prev);
      prev = b;
    }
    const sc::MultinomialModel model(40, p);
    EXPECT_NEAR(sc::bound_pearson_smooth(unit_norms(6).scaled(2.5), model, v).value,
                2.5 * sc::bound_pearson_smooth(unit_norms(6), model, v).value, 1e-9);
  }
}

TEST(Kolmogorov, WorkedValues) {
  EXPECT_NEAR(sc::kolmogorov_closed_form(2, 1e5), std::pow(1e5, -0.1) * (8 + 21 * 0.1 + 72 * 0.01), 1e-12);
  EXPECT_NEAR(sc::kolmogorov_closed_form(2, 1e5), 3.4216, 1e-4);
  EXPECT_NEAR(sc::kolmogorov_closed_form(3, 1e6), 2.412, 1e-12);
  EXPECT_NEAR(sc::kolmogorov_closed_form(4, 1e6), 0.1 * (13 + 37 * 0.1 + 72 * 0.01), 1e-12);
  for (int m : {2, 3, 6}) EXPECT_LT(sc::kolmogorov_closed_form(m, 2e3), sc::kolmogorov_closed_form(m, 1e3));
  const auto r = sc::bound_kolmogorov_pearson(sc::MultinomialModel(1000, {0.2, 0.3, 0.5}));
  EXPECT_NEAR(r.value, sc::kolmogorov_closed_form(3, 200.0), 1e-12);
  EXPECT_FALSE(sc::bound_kolmogorov_pearson(sc::MultinomialModel(3, {0.2, 0.8})).hypotheses_ok());
}

TEST(Kolmogorov, DensityTerms) {
  EXPECT_NEAR(sc::chi_square_density_term(2, 0.3), std::sqrt(0.6 / std::numbers::pi), 1e-15);
  EXPECT_NEAR(sc::chi_square_density_term(3, 0.3), 0.15, 1e-15);
  EXPECT_NEAR(sc::chi_square_density_term(7, 0.3), 0.3 / (2 * std::sqrt(4 * std::numbers::pi)), 1e-15);
}

TEST(Kolmogorov, OptimizerDominatesStatedAlpha) {
  for (int m : {2, 3, 5})
    for (double t : {1e3, 1e4, 1e5, 1e6}) {
      const auto best = sc::smooth_to_kolmogorov([&](double a) { return sc::smoothed_indicator_bound(t, a); },
                                                 [&](double a) { return sc::chi_square_density_term(m, a); },
                                                 sc::default_alpha_grid(m, t));
      EXPECT_LE(best.value, sc::kolmogorov_objective(m, t, sc::stated_alpha(m, t)) * (1 + 1e-12)) << m << " " << t;
      // stated value dominates the objective at the stated alpha
      EXPECT_LE(sc::kolmogorov_objective(m, t, sc::stated_alpha(m, t)), sc::kolmogorov_closed_form(m, t) * (1 + 1e-9));
    }
  EXPECT_THROW(sc::smooth_to_kolmogorov([](double) { return 0.0; }, [](double) { return 0.0; }, {}),
               sc::InvalidArgument);
}

TEST(Literature, WorkedValues) {
  const auto l = sc::bound_literature(1000000, {0.25, 0.25, 0.25, 0.25});
  EXPECT_NEAR(l.original, 8.0, 1e-12);
  EXPECT_NEAR(l.refined, 400 * std::sqrt(2.0) * 8 / 1000, 1e-12);
  EXPECT_LT(l.refined, l.original);
  const auto l2 = sc::bound_literature(2000000, {0.25, 0.25, 0.25, 0.25});
  EXPECT_NEAR(l.original / l2.original, std::sqrt(2.0), 1e-12);
}
