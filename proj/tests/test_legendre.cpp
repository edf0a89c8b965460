#include "entire_growth/legendre.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace entire_growth;
using namespace entire_growth::legendre;

namespace {

SampledFunction1D sample(const std::function<double(double)>& g, double lo, double hi, std::size_t n) {
  return SampledFunction1D::uniform(g, lo, hi, n);
}

/// Convex piecewise-linear function with random increasing slopes.
SampledFunction1D random_convex(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> step(0.01, 0.5), slope_inc(0.0, 1.0);
  std::vector<double> xs(n), gs(n);
  double x = -10.0, g = 0.0, slope = -5.0;
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x;
    gs[i] = g;
    const double h = step(rng);
    slope += slope_inc(rng);
    x += h;
    g += slope * h;
  }
  return SampledFunction1D(xs, gs);
}

SampledFunction1D random_nonconvex(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> step(0.01, 0.5), val(-3.0, 3.0);
  std::vector<double> xs(n), gs(n);
  double x = -5.0;
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x;
    gs[i] = 0.05 * x * x + val(rng);
    x += step(rng);
  }
  return SampledFunction1D(xs, gs);
}

void expect_matches_brute(const SampledFunction1D& g, const std::vector<double>& ys) {
  const auto tab = conjugate_1d(g, ys);
  for (std::size_t j = 0; j < ys.size(); ++j) {
    const auto ref = oracle::brute_conjugate(g.xs(), g.gs(), ys[j]);
    ASSERT_EQ(tab.gstars[j], ref.value) << "y=" << ys[j];
    ASSERT_EQ(tab.argmax_xs[j], ref.argmax) << "y=" << ys[j];
  }
}

}  // namespace

TEST(Conjugate1D, QuadraticIsSelfDual) {
  const auto g = sample([](double x) { return 0.5 * x * x; }, -10.0, 10.0, 2001);
  const double y[1] = {3.0};
  const auto tab = conjugate_1d(g, y);
  EXPECT_NEAR(tab.gstars[0], 4.5, 1e-12);
  EXPECT_NEAR(tab.argmax_xs[0], 3.0, 1e-12);
}

TEST(Conjugate1D, AbsoluteValueIsIndicatorTruncatedByWindow) {
  const auto g = sample([](double x) { return std::abs(x); }, -5.0, 5.0, 101);
  const double ys[2] = {0.5, 2.0};
  const auto tab = conjugate_1d(g, ys);
  EXPECT_DOUBLE_EQ(tab.gstars[0], 0.0);
  EXPECT_DOUBLE_EQ(tab.gstars[1], 5.0);
  EXPECT_DOUBLE_EQ(tab.argmax_xs[1], 5.0);
}

TEST(Conjugate1D, RandomConvexPiecewiseLinearMatchesBruteForce) {
  std::mt19937_64 rng(7);
  const auto g = random_convex(rng, 64);
  expect_matches_brute(g, oracle::linspace(-6.0, 30.0, 33));
}

TEST(Conjugate1D, RandomNonconvexMatchesBruteForceBitwise) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const auto g = random_nonconvex(rng, 64 + 200 * rep);
    expect_matches_brute(g, oracle::linspace(-4.0, 4.0, 257));
  }
}

TEST(Conjugate1D, TiesResolveToSmallestX) {
  const SampledFunction1D g({-1.0, 0.0, 1.0}, {0.0, 0.0, 0.0});
  const double y[1] = {0.0};
  EXPECT_EQ(conjugate_1d(g, y).argmax_xs[0], -1.0);
}

TEST(Conjugate1D, InfiniteSamplesMarkOutsideDomain) {
  const SampledFunction1D g({-1.0, 0.0, 1.0, 2.0}, {kInf, 0.0, 1.0, kInf});
  const double y[1] = {10.0};
  const auto tab = conjugate_1d(g, y);
  EXPECT_DOUBLE_EQ(tab.gstars[0], 9.0);
  EXPECT_DOUBLE_EQ(tab.argmax_xs[0], 1.0);
}

TEST(Conjugate1D, Errors) {
  try {
    SampledFunction1D({0.0, 1.0, 2.0}, {0.0, kInf, kInf});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain_degenerate);
  }
  try {
    SampledFunction1D({0.0, 2.0, 1.0}, {0.0, 1.0, 2.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::input);
  }
  const SampledFunction1D g({0.0, 1.0}, {0.0, 1.0});
  const double ys[2] = {1.0, 0.0};
  EXPECT_THROW(conjugate_1d(g, ys), Error);
  EXPECT_THROW(SampledFunction1D({0.0, 1.0}, {0.0, kNegInf}), Error);
}

TEST(Conjugate1D, OutputIsAlwaysDiscreteConvex) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    const auto g = random_nonconvex(rng, 500);
    const auto ys = oracle::linspace(-5.0, 5.0, 301);
    const auto tab = conjugate_1d(g, ys);
    EXPECT_TRUE(is_discrete_convex(tab.ys, tab.gstars));
  }
}

TEST(Conjugate1D, OrderReversal) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> bump(0.0, 1.0);
  const auto xs = oracle::linspace(-3.0, 3.0, 200);
  std::vector<double> g(xs.size()), h(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    g[i] = std::cos(xs[i]) + xs[i] * xs[i] / 4.0;
    h[i] = g[i] + bump(rng);
  }
  const auto ys = oracle::linspace(-2.0, 2.0, 50);
  const auto gs = conjugate_1d(SampledFunction1D(xs, g), ys);
  const auto hs = conjugate_1d(SampledFunction1D(xs, h), ys);
  for (std::size_t j = 0; j < ys.size(); ++j) EXPECT_GE(gs.gstars[j], hs.gstars[j]);
}

TEST(Conjugate1D, ShiftAndTranslationRules) {
  const auto xs = oracle::linspace(-4.0, 4.0, 161);
  std::vector<double> g(xs.size()), g_plus(xs.size()), xs_shift(xs.size());
  const double c = 1.75, a = 0.6;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    g[i] = 0.5 * xs[i] * xs[i];
    g_plus[i] = g[i] + c;
    xs_shift[i] = xs[i] + a;  // samples of g(x - a)
  }
  const auto ys = oracle::linspace(-2.0, 2.0, 41);
  const auto base = conjugate_1d(SampledFunction1D(xs, g), ys);
  const auto plus = conjugate_1d(SampledFunction1D(xs, g_plus), ys);
  const auto moved = conjugate_1d(SampledFunction1D(xs_shift, g), ys);
  for (std::size_t j = 0; j < ys.size(); ++j) {
    EXPECT_NEAR(plus.gstars[j], base.gstars[j] - c, 1e-12);
    EXPECT_NEAR(moved.gstars[j], base.gstars[j] + a * ys[j], 1e-12);
    EXPECT_NEAR(base.gstars[j], base.gstars[ys.size() - 1 - j], 1e-12);  // even in, even out
  }
}

TEST(Biconjugate1D, ConvexInputRoundTripsOnSamples) {
  const auto g = sample([](double x) { return std::exp(x); }, -5.0, 5.0, 1001);
  std::vector<double> interior(g.xs().begin() + 1, g.xs().end() - 1);
  const auto bi = biconjugate_1d(g, interior);
  for (std::size_t i = 0; i < interior.size(); ++i) EXPECT_NEAR(bi.gstars[i], std::exp(interior[i]), 1e-8);
}

TEST(Biconjugate1D, NonconvexGivesConvexMinorant) {
  auto f = [](double x) { return std::sin(x) + x * x / 20.0; };
  const auto g = sample(f, -10.0, 10.0, 801);
  const auto xs_out = oracle::linspace(-9.9, 9.9, 397);
  const auto bi = biconjugate_1d(g, xs_out);
  for (std::size_t i = 0; i < xs_out.size(); ++i) EXPECT_LE(bi.gstars[i], g.value_at(xs_out[i]) + 1e-12);
  EXPECT_TRUE(is_discrete_convex(bi.ys, bi.gstars));

  // brute double conjugation over a slope grid of step h sits below the
  // envelope by at most h/2 times the width of the sampled range
  const auto ys = oracle::linspace(-3.0, 3.0, 6001);
  const auto brute = oracle::brute_biconjugate(g.xs(), g.gs(), ys, xs_out);
  for (std::size_t i = 0; i < xs_out.size(); ++i) {
    EXPECT_LE(brute[i], bi.gstars[i] + 1e-12);
    EXPECT_NEAR(brute[i], bi.gstars[i], 0.5e-3 * 20.0);
  }
}

TEST(Biconjugate1D, TwoPointsGiveLinearInterpolant) {
  const SampledFunction1D g({0.0, 1.0}, {0.0, 1.0});
  const double xs[4] = {-0.5, 0.0, 0.25, 1.0};
  const auto bi = biconjugate_1d(g, xs);
  EXPECT_EQ(bi.gstars[0], kInf);
  EXPECT_DOUBLE_EQ(bi.gstars[1], 0.0);
  EXPECT_DOUBLE_EQ(bi.gstars[2], 0.25);
  EXPECT_DOUBLE_EQ(bi.gstars[3], 1.0);
}

TEST(Biconjugate1D, QuadraticErrorShrinksQuadratically) {
  double prev = 0.0;
  for (std::size_t n : {41u, 81u, 161u, 321u}) {
    const auto g = sample([](double x) { return 0.5 * x * x; }, -4.0, 4.0, n);
    const auto xs_out = oracle::linspace(-3.0, 3.0, 1237);
    const auto bi = biconjugate_1d(g, xs_out);
    double err = 0.0;
    for (std::size_t i = 0; i < xs_out.size(); ++i) err = std::max(err, std::abs(bi.gstars[i] - 0.5 * xs_out[i] * xs_out[i]));
    if (prev > 0.0) {
      EXPECT_GE(prev / err, 3.5);
    }
    prev = err;
  }
}

TEST(YoungGap, EqualityOnConjugatePair) {
  const auto g = sample([](double x) { return 0.5 * x * x; }, -10.0, 10.0, 2001);
  EXPECT_NEAR(young_gap(g, 1.0, 1.0, 1.0), 0.0, 1e-12);
  EXPECT_NEAR(young_gap(g, 1.0, 1.0, 2.0), 1.125, 1e-12);
}

TEST(YoungGap, FuzzNeverNegative) {
  const auto g = sample([](double x) { return std::exp(x); }, -6.0, 4.0, 2001);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> gam(0.2, 3.0), yy(-1.0, 40.0), uu(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double gamma = gam(rng);
    const double x = (-6.0 + 10.0 * uu(rng)) / gamma;
    const double y = yy(rng);
    EXPECT_GE(young_gap(g, x, y, gamma), -1e-9);
  }
}

TEST(YoungGap, Errors) {
  const auto g = sample([](double x) { return x * x; }, -1.0, 1.0, 11);
  try {
    young_gap(g, 2.0, 0.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::extrapolation);
  }
  EXPECT_THROW(young_gap(g, 0.5, 0.0, 0.0), Error);
}

TEST(ConjugateND, SeparableQuadraticIsSelfDual) {
  const auto axis = sample([](double x) { return 0.5 * x * x; }, -6.0, 6.0, 121);
  const auto g = SampledFunctionND::separable({axis, axis});
  const std::vector<std::vector<double>> q = {oracle::linspace(-2.0, 2.0, 21), oracle::linspace(-2.0, 2.0, 21)};
  const auto out = conjugate_nd(g, q);
  std::size_t idx[2];
  for (idx[0] = 0; idx[0] < 21; ++idx[0])
    for (idx[1] = 0; idx[1] < 21; ++idx[1]) {
      const double y1 = q[0][idx[0]], y2 = q[1][idx[1]];
      EXPECT_NEAR(out.at(idx), 0.5 * (y1 * y1 + y2 * y2), 1e-12);
    }
}

TEST(ConjugateND, SeparableMatchesBruteForceProductGrid) {
  const auto a = sample([](double x) { return std::exp(x); }, -4.0, 3.0, 71);
  const auto b = sample([](double x) { return x * x * x * x / 4.0; }, -3.0, 3.0, 61);
  const auto g = SampledFunctionND::separable({a, b});
  const std::vector<std::vector<double>> q = {oracle::linspace(0.1, 15.0, 17), oracle::linspace(-20.0, 20.0, 19)};
  const auto fast = conjugate_nd(g, q);
  const auto brute = conjugate_nd_brute(g, q);
  for (std::size_t i = 0; i < fast.values().size(); ++i) EXPECT_NEAR(fast.values()[i], brute.values()[i], 1e-9);
}

TEST(ConjugateND, NonSeparableQuarticIsAxisConvex) {
  const auto grid = oracle::linspace(-2.0, 2.0, 101);
  std::vector<double> vals;
  for (double x1 : grid)
    for (double x2 : grid) {
      const double r2 = x1 * x1 + x2 * x2;
      vals.push_back(r2 * r2);
    }
  const SampledFunctionND g({grid, grid}, vals);
  const std::vector<std::vector<double>> q = {oracle::linspace(-5.0, 5.0, 31), oracle::linspace(-5.0, 5.0, 31)};
  const auto out = conjugate_nd(g, q);
  for (std::size_t i = 0; i < 31; ++i) {
    std::vector<double> row, col;
    for (std::size_t j = 0; j < 31; ++j) {
      const std::size_t r[2] = {i, j}, c[2] = {j, i};
      row.push_back(out.at(r));
      col.push_back(out.at(c));
    }
    EXPECT_TRUE(is_discrete_convex(q[1], row));
    EXPECT_TRUE(is_discrete_convex(q[0], col));
  }
}

TEST(ConjugateND, Errors) {
  const std::vector<double> ax = {0.0, 1.0};
  try {
    SampledFunctionND({ax, ax, ax, ax}, std::vector<double>(16, 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unsupported);
  }
  const SampledFunctionND g({ax, ax}, std::vector<double>(4, 0.0));
  NdLimits tiny;
  tiny.max_elements = 10;
  try {
    conjugate_nd(g, {oracle::linspace(0, 1, 5), oracle::linspace(0, 1, 5)}, tiny);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::resource);
  }
}

TEST(ConjugateAt, ExponentialMatchesStationaryPoint) {
  const auto pc = conjugate_at([](double v) { return std::exp(v); }, 5.0);
  EXPECT_NEAR(pc.value, 5.0 * std::log(5.0) - 5.0, 1e-12);
  EXPECT_NEAR(pc.argmax, std::log(5.0), 1e-6);
  EXPECT_FALSE(pc.saturated);
}

TEST(ConjugateAt, WindowGrowsToReachFarArgmax) {
  const auto pc = conjugate_at([](double v) { return 0.5 * v * v; }, 300.0);
  EXPECT_NEAR(pc.value, 45000.0, 1e-7);
  EXPECT_FALSE(pc.saturated);
}

TEST(ConjugateAt, SaturationAtHardCapIsFlagged) {
  const auto pc = conjugate_at([](double v) { return std::exp(v); }, 0.0);
  EXPECT_TRUE(pc.saturated);
  EXPECT_NEAR(pc.value, 0.0, 1e-300);
}

TEST(ConjugateAt, FiniteDomainEdgeIsNotSaturation) {
  const auto pc = conjugate_at([](double v) { return v; }, -1.0, {0.0, kInf});
  EXPECT_FALSE(pc.saturated);
  EXPECT_DOUBLE_EQ(pc.value, 0.0);
  EXPECT_DOUBLE_EQ(pc.argmax, 0.0);
}

TEST(ConjugateAtND, SeparableExponentialsSumPerAxis) {
  const double y[2] = {3.0, 4.0};
  const auto pc = conjugate_at_nd([](std::span<const double> v) { return std::exp(v[0]) + std::exp(v[1]); }, y);
  EXPECT_NEAR(pc.value, (3.0 * std::log(3.0) - 3.0) + (4.0 * std::log(4.0) - 4.0), 1e-10);
}
