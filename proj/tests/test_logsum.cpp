#include "entire_growth/logsum.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace entire_growth;

TEST(LogSumExp, MatchesNaiveSumAndIgnoresZeroTerms) {
  LogSumExp acc;
  acc.add(std::log(2.0));
  acc.add(kNegInf);
  acc.add(std::log(3.0));
  EXPECT_NEAR(acc.value(), std::log(5.0), 1e-15);
}

TEST(LogSumExp, SurvivesHugeExponents) {
  LogSumExp acc;
  acc.add(1000.0);
  acc.add(1000.0);
  EXPECT_NEAR(acc.value(), 1000.0 + std::log(2.0), 1e-12);
}

TEST(LogSumExp, EmptyIsNegInf) { EXPECT_EQ(LogSumExp{}.value(), kNegInf); }

TEST(SeriesSum, GeometricConverges) {
  const auto r = sum_log_series([](std::size_t n) { return -0.5 * static_cast<double>(n); });
  ASSERT_EQ(r.status, SeriesStatus::converged);
  EXPECT_NEAR(std::exp(r.log_sum), 1.0 / (1.0 - std::exp(-0.5)), 1e-13);
}

TEST(SeriesSum, ConstantTermsDiverge) {
  const auto r = sum_log_series([](std::size_t) { return 0.0; });
  EXPECT_EQ(r.status, SeriesStatus::diverged);
  EXPECT_EQ(r.log_sum, kInf);
}

TEST(SeriesSum, IncreasingTermsDivergeShortlyAfterCheckpoint) {
  SeriesOptions opt;
  const auto r = sum_log_series([](std::size_t n) { return 1e-3 * static_cast<double>(n); }, opt);
  EXPECT_EQ(r.status, SeriesStatus::diverged);
  EXPECT_LE(r.terms, opt.divergence_check + opt.tail_run + 1);
}

TEST(SeriesSum, FiniteTableSumsExactly) {
  const auto r = sum_log_series([](std::size_t n) { return n == 3 ? 0.0 : kNegInf; }, {}, std::size_t{10});
  EXPECT_EQ(r.status, SeriesStatus::converged);
  EXPECT_DOUBLE_EQ(r.log_sum, 0.0);
  EXPECT_EQ(r.terms, 11u);
}

TEST(SeriesSum, MaxTermsExhausts) {
  SeriesOptions opt;
  opt.max_terms = 100;
  const auto r = sum_log_series([](std::size_t) { return 0.0; }, opt);
  EXPECT_EQ(r.status, SeriesStatus::exhausted);
}
