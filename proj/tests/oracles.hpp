#pragma once

// Reference computations for the test suites. Nothing here calls into the
// library's conjugation or summation code.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace oracle {

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// max_i (x_i*y - g_i), smallest x on ties; same expression as the engine.
struct BruteConjugate {
  double value;
  double argmax;
};

inline BruteConjugate brute_conjugate(std::span<const double> xs, std::span<const double> gs, double y) {
  double best = -inf;
  double arg = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(gs[i])) continue;
    const double v = xs[i] * y - gs[i];
    if (v > best) {
      best = v;
      arg = xs[i];
    }
  }
  return {best, arg};
}

/// Double conjugation by brute force over two fixed grids.
inline std::vector<double> brute_biconjugate(std::span<const double> xs, std::span<const double> gs,
                                             std::span<const double> ys, std::span<const double> xs_out) {
  std::vector<double> gstar(ys.size());
  for (std::size_t j = 0; j < ys.size(); ++j) gstar[j] = brute_conjugate(xs, gs, ys[j]).value;
  std::vector<double> out(xs_out.size());
  for (std::size_t i = 0; i < xs_out.size(); ++i) out[i] = brute_conjugate(ys, gstar, xs_out[i]).value;
  return out;
}

/// ln n! as an explicit sum of logarithms (independent of lgamma).
inline double log_factorial(std::size_t n) {
  long double s = 0.0L;
  for (std::size_t k = 2; k <= n; ++k) s += std::log(static_cast<long double>(k));
  return static_cast<double>(s);
}

/// ln sum_{n=0}^{N} exp(t(n)) in long double with a fixed max shift.
inline double direct_log_sum(const std::function<double(std::size_t)>& t, std::size_t n_terms) {
  double m = -inf;
  for (std::size_t n = 0; n < n_terms; ++n) m = std::max(m, t(n));
  if (m == -inf) return -inf;
  long double s = 0.0L;
  for (std::size_t n = 0; n < n_terms; ++n) {
    const double v = t(n);
    if (v != -inf) s += std::exp(static_cast<long double>(v) - m);
  }
  return m + static_cast<double>(std::log(s));
}

/// Ternary search for the maximum of a unimodal f on [a, b].
inline double ternary_max(const std::function<double(double)>& f, double a, double b, int iters = 300) {
  for (int i = 0; i < iters; ++i) {
    const double m1 = a + (b - a) / 3.0;
    const double m2 = b - (b - a) / 3.0;
    if (f(m1) < f(m2)) a = m1;
    else b = m2;
  }
  return f(0.5 * (a + b));
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  v.back() = hi;
  return v;
}

}  // namespace oracle
