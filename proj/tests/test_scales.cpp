#include "entire_growth/scales.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace entire_growth;
using namespace entire_growth::scales;

TEST(RegVar, QuadraticPhiIsSelfDual) {
  const auto s = RegVarScale::phi(2.0);
  for (double x : {std::numbers::e, 5.0, 40.0, 300.0}) {
    EXPECT_NEAR(conjugate_asymptotic(s, x), 0.5 * x * x, 1e-12 * x * x);
    EXPECT_NEAR(conjugate_numeric(s, x), 0.5 * x * x, 1e-9 * x * x);
  }
}

TEST(RegVar, PowerPhiMatchesConjugateExponent) {
  const auto s = RegVarScale::phi(3.0);
  const double mp = 1.5;
  for (double x : {4.0, 100.0, 1e4}) EXPECT_NEAR(conjugate_numeric(s, x) / (std::pow(x, mp) / mp), 1.0, 1e-9);
}

TEST(RegVar, PsiAsymptoticRatioTendsToOne) {
  const auto s = RegVarScale::psi(2.0, 1.0, 1.0);
  double prev = kInf;
  for (double lx : {3.0, 6.0, 12.0, 24.0}) {
    const double x = std::exp(lx);
    const double dev = std::abs(conjugate_numeric(s, x) / conjugate_asymptotic(s, x) - 1.0);
    EXPECT_LT(dev, prev);
    prev = dev;
  }
}

TEST(RegVar, Validation) {
  EXPECT_THROW(RegVarScale::phi(1.0).validate(), Error);
  EXPECT_THROW(RegVarScale::psi(2.0, -1.0).validate(), Error);
  EXPECT_THROW(conjugate_asymptotic(RegVarScale::phi(2.0), 2.0), Error);
  EXPECT_EQ(RegVarScale::phi(2.0, 1.0)(2.0), kInf);
}

TEST(ExponentFit, PurePowerGivesExponent) {
  const auto xs = oracle::linspace(1.0, 50.0, 20);
  std::vector<double> ys;
  for (double x : xs) ys.push_back(3.0 * std::pow(x, 1.5));
  const auto fit = exponent_fit(xs, ys);
  EXPECT_TRUE(std::isnan(fit[0]));
  for (std::size_t i = 1; i < fit.size(); ++i) EXPECT_NEAR(fit[i], 1.5, 1e-12);
}

TEST(Example31, QuadraticLogGrowth) {
  const std::vector<double> ns = {10.0, 100.0, 1000.0};
  const auto rep = example_31_check(2.0, 1.0, ns);
  EXPECT_DOUBLE_EQ(rep.m_prime, 2.0);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    EXPECT_NEAR(rep.lambda_star[i], ns[i] * ns[i] / 4.0, 1e-9 * ns[i] * ns[i]);
    EXPECT_NEAR(rep.c4[i], 0.25, 1e-9);
  }
  for (std::size_t i = 1; i < ns.size(); ++i) EXPECT_NEAR(rep.exponent_fit[i], 2.0, 1e-8);
}

TEST(Example32, ExtremalCoefficientsMeetTheBound) {
  for (double rho : {0.5, 1.0, 2.5}) {
    const double c4 = 1.3;
    const std::vector<double> ns = {1.0, 10.0, 100.0, 1000.0};
    for (const auto& row : example_32_report(entire::power_order(rho, c4), rho, c4, ns))
      EXPECT_NEAR(row.slack, 0.0, 1e-12 * std::max(1.0, std::abs(row.log_bound)));
  }
  EXPECT_EQ(example_32_bound(1.0, 1.0, 0.0), 0.0);
}

TEST(Example32, ExpIsStrictlyInsideTheBound) {
  // e^z has order 1 and type 1
  const std::vector<double> ns = {5.0, 50.0, 500.0};
  for (const auto& row : example_32_report(entire::exp_series(), 1.0, 1.0, ns)) EXPECT_GT(row.slack, 0.0);
}

TEST(Example32, RefinedRate) {
  const double n = 100.0;
  EXPECT_NEAR(example_32_refined_rate(2.0, 1.5, n),
              (n * std::log(n) + 1.5 * n * std::log(std::log(n)) - n) / 2.0, 1e-12);
  EXPECT_THROW(example_32_refined_rate(1.0, 0.0, 2.0), Error);
}

TEST(Example33, LeadingRatioApproachesOne) {
  const std::vector<double> ns = {1e3, 1e4, 1e5};
  const auto rep = example_33_check(1.0, 1.0, 1.0, ns);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    EXPECT_FALSE(rep.saturated[i]);
    EXPECT_GT(rep.leading_ratio[i], 0.5);
    EXPECT_LT(rep.leading_ratio[i], 1.0);
    if (i > 0) {
      EXPECT_GT(rep.leading_ratio[i], rep.leading_ratio[i - 1]);
    }
  }
  EXPECT_THROW(example_33_check(1.0, 1.0, 1.0, std::vector<double>{2.0}), Error);
}
