#pragma once

// Entire functions f(z) = sum c_n z^n described by ln|c_n|, with the
// maximal-function evaluator and the order/type scans.

#include "entire_growth/error.hpp"
#include "entire_growth/logsum.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace entire_growth::entire {

/// ln|c_n|, or nullopt for an exactly zero coefficient.
using LogCoeff = std::optional<double>;

enum class CoefficientSign { nonnegative, mixed };

class CoefficientSequence {
 public:
  using Rule = std::function<LogCoeff(std::size_t)>;

  static CoefficientSequence from_rule(std::string name, Rule rule,
                                       CoefficientSign sign = CoefficientSign::nonnegative) {
    CoefficientSequence s;
    s.name_ = std::move(name);
    s.rule_ = std::move(rule);
    s.sign_ = sign;
    return s;
  }

  /// Table entry i holds ln|c_i|; indices past the end are zero.
  static CoefficientSequence from_table(std::string name, std::vector<LogCoeff> table,
                                        CoefficientSign sign = CoefficientSign::nonnegative) {
    for (const auto& v : table)
      if (v && (std::isnan(*v) || *v == kInf)) throw Error(ErrorKind::input, "table holds a non-finite ln|c_n|");
    auto shared = std::make_shared<const std::vector<LogCoeff>>(std::move(table));
    CoefficientSequence s;
    s.name_ = std::move(name);
    s.sign_ = sign;
    s.table_size_ = shared->size();
    s.rule_ = [shared](std::size_t n) -> LogCoeff { return n < shared->size() ? (*shared)[n] : std::nullopt; };
    return s;
  }

  LogCoeff log_abs(std::size_t n) const { return rule_(n); }
  double log_abs_or_neg_inf(std::size_t n) const {
    const auto v = rule_(n);
    return v ? *v : kNegInf;
  }

  const std::string& name() const { return name_; }
  CoefficientSign sign() const { return sign_; }
  bool is_table() const { return table_size_.has_value(); }
  /// Last index that may be nonzero (tables only).
  std::optional<std::size_t> max_index() const {
    if (!table_size_) return std::nullopt;
    return *table_size_ == 0 ? std::optional<std::size_t>{} : std::optional<std::size_t>{*table_size_ - 1};
  }
  bool is_zero_table() const { return table_size_ && *table_size_ == 0; }

 private:
  CoefficientSequence() = default;
  std::string name_;
  Rule rule_;
  CoefficientSign sign_ = CoefficientSign::nonnegative;
  std::optional<std::size_t> table_size_;
};

// ---- families ------------------------------------------------------------

/// e^z: c_n = 1/n!.
inline CoefficientSequence exp_series() {
  return CoefficientSequence::from_rule("exp", [](std::size_t n) -> LogCoeff { return -std::lgamma(n + 1.0); });
}

/// c_n = n^{-a n}, c_0 = 1 (order 1/a).
inline CoefficientSequence self_power(double a) {
  if (!(a > 0.0)) throw Error(ErrorKind::input, "self_power needs a > 0");
  return CoefficientSequence::from_rule("self_power", [a](std::size_t n) -> LogCoeff {
    return n == 0 ? 0.0 : -a * static_cast<double>(n) * std::log(static_cast<double>(n));
  });
}

/// c_n = exp(-a n^2) (order zero).
inline CoefficientSequence gaussian_decay(double a) {
  if (!(a > 0.0)) throw Error(ErrorKind::input, "gaussian_decay needs a > 0");
  return CoefficientSequence::from_rule("gaussian_decay", [a](std::size_t n) -> LogCoeff {
    const double x = static_cast<double>(n);
    return -a * x * x;
  });
}

/// Mittag-Leffler type coefficients c_n = 1/Gamma(n/rho + 1); ln M ~ r^rho.
inline CoefficientSequence mittag_leffler(double rho) {
  if (!(rho > 0.0)) throw Error(ErrorKind::input, "mittag_leffler needs rho > 0");
  return CoefficientSequence::from_rule("mittag_leffler", [rho](std::size_t n) -> LogCoeff {
    return -std::lgamma(static_cast<double>(n) / rho + 1.0);
  });
}

/// Extremal coefficients of order rho and type C: c_n = (e C rho / n)^{n/rho}, c_0 = 1.
inline CoefficientSequence power_order(double rho, double c) {
  if (!(rho > 0.0) || !(c > 0.0)) throw Error(ErrorKind::input, "power_order needs rho > 0 and C > 0");
  return CoefficientSequence::from_rule("power_order", [rho, c](std::size_t n) -> LogCoeff {
    if (n == 0) return 0.0;
    const double x = static_cast<double>(n);
    return -(x / rho) * std::log(x / (c * rho)) + x / rho;
  });
}

/// Finite polynomial from plain coefficient values (sign recorded).
inline CoefficientSequence polynomial(const std::vector<double>& coeffs) {
  std::vector<LogCoeff> table;
  bool nonneg = true;
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw Error(ErrorKind::input, "polynomial coefficient not finite");
    if (c < 0.0) nonneg = false;
    table.push_back(c == 0.0 ? LogCoeff{} : LogCoeff{std::log(std::abs(c))});
  }
  while (!table.empty() && !table.back()) table.pop_back();
  return CoefficientSequence::from_table("polynomial", std::move(table),
                                         nonneg ? CoefficientSign::nonnegative : CoefficientSign::mixed);
}

/// c_n <- c_n * a^n, i.e. f(z) -> f(a z).
inline CoefficientSequence rescale(const CoefficientSequence& f, double a) {
  if (!(a > 0.0)) throw Error(ErrorKind::input, "rescale needs a > 0");
  const double la = std::log(a);
  auto rule = [f, la](std::size_t n) -> LogCoeff {
    const auto v = f.log_abs(n);
    if (!v) return std::nullopt;
    return *v + static_cast<double>(n) * la;
  };
  if (f.is_table()) {
    std::vector<LogCoeff> t;
    if (auto m = f.max_index())
      for (std::size_t n = 0; n <= *m; ++n) t.push_back(rule(n));
    return CoefficientSequence::from_table(f.name() + "_rescaled", std::move(t), f.sign());
  }
  return CoefficientSequence::from_rule(f.name() + "_rescaled", rule, f.sign());
}

// ---- maximal function ----------------------------------------------------

struct LogMaxResult {
  double value = kNegInf;  // ln sum |c_n| r^n
  std::size_t terms = 0;
  bool exact = false;  // nonnegative coefficients: the sum equals M_f(r)
};

/// ln of sum |c_n| r^n, an upper bound for ln M_f(r) that is attained when
/// every c_n >= 0. Terms may keep growing for a long stretch (the peak of
/// r^n/n! sits at n ~ r), so only the tail rule and `max_terms` stop the sum.
inline LogMaxResult log_max_function(const CoefficientSequence& f, double r, SeriesOptions opt = {}) {
  opt.divergence_check = opt.max_terms;
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorKind::input, "r must be positive and finite");
  const double lr = std::log(r);
  LogMaxResult out;
  out.exact = f.sign() == CoefficientSign::nonnegative;
  if (f.is_zero_table()) return out;
  const auto res = sum_log_series(
      [&](std::size_t n) {
        const auto c = f.log_abs(n);
        return c ? *c + static_cast<double>(n) * lr : kNegInf;
      },
      opt, f.max_index());
  if (res.status != SeriesStatus::converged)
    throw Error(ErrorKind::truncation, "series for '" + f.name() + "' at r=" + std::to_string(r) +
                                           (res.status == SeriesStatus::diverged ? " diverges" : " not converged") +
                                           " after " + std::to_string(res.terms) + " terms");
  out.value = res.log_sum;
  out.terms = res.terms;
  return out;
}

/// Entirety screen on [n0, n_max]: (1/n) ln|c_n| must be non-increasing along
/// the nonzero indices and end strictly below where it started. A zero tail
/// (polynomial) also passes.
inline bool check_entire(const CoefficientSequence& f, std::size_t n0 = 10, std::size_t n_max = 1000) {
  if (f.is_table()) return true;
  std::optional<double> first, prev;
  std::size_t count = 0;
  for (std::size_t n = std::max<std::size_t>(n0, 1); n <= n_max; ++n) {
    const auto c = f.log_abs(n);
    if (!c) continue;
    const double a = *c / static_cast<double>(n);
    if (prev && a > *prev + 1e-12 * std::max(1.0, std::abs(*prev))) return false;
    if (!first) first = a;
    prev = a;
    ++count;
  }
  if (count < 2) return true;
  return *prev < *first;
}

/// Degree if every coefficient past it is zero up to `scan_to` (exact for tables).
inline std::optional<std::size_t> polynomial_degree(const CoefficientSequence& f, std::size_t scan_to = 2000) {
  if (f.is_table()) return f.max_index().value_or(0);
  std::optional<std::size_t> last;
  for (std::size_t n = 0; n <= scan_to; ++n)
    if (f.log_abs(n)) last = n;
  if (last && *last + 64 <= scan_to) return last;
  return std::nullopt;
}

// ---- order and type ------------------------------------------------------

struct GrowthScan {
  double estimate = 0.0;                // max over the window
  std::vector<std::size_t> indices;     // nonzero indices scanned
  std::vector<double> values;           // per-index quantity
  std::vector<double> running_max;      // limsup surrogate along the window
};

namespace detail {

inline void check_window(std::size_t n_min, std::size_t n_max, std::size_t floor) {
  if (n_min < floor || n_max <= n_min)
    throw Error(ErrorKind::input, "scan window needs n_max > n_min >= " + std::to_string(floor));
}

inline GrowthScan finish_scan(GrowthScan scan, const char* what) {
  if (scan.indices.empty()) throw Error(ErrorKind::undefined_order, std::string("no nonzero coefficient for ") + what);
  double m = kNegInf;
  for (double v : scan.values) {
    m = std::max(m, v);
    scan.running_max.push_back(m);
  }
  scan.estimate = m;
  return scan;
}

}  // namespace detail

/// max over n in [n_min, n_max] of n ln n / |ln |c_n||.
inline GrowthScan order_estimate(const CoefficientSequence& f, std::size_t n_min, std::size_t n_max) {
  detail::check_window(n_min, n_max, 2);
  GrowthScan scan;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    const auto c = f.log_abs(n);
    if (!c || *c == 0.0) continue;  // |ln 1| = 0 carries no order information
    const double x = static_cast<double>(n);
    scan.indices.push_back(n);
    scan.values.push_back(x * std::log(x) / std::abs(*c));
  }
  return detail::finish_scan(std::move(scan), "order");
}

/// max over n in [n_min, n_max] of n^{1/rho} |c_n|^{1/n}, evaluated in log
/// form. This is the unnormalised limsup; the classical type differs by the
/// factor (e rho)^{-1/rho} after raising to the power rho.
inline GrowthScan type_estimate(const CoefficientSequence& f, double rho, std::size_t n_min, std::size_t n_max) {
  if (!(rho > 0.0)) throw Error(ErrorKind::input, "rho must be positive");
  detail::check_window(n_min, n_max, 1);
  GrowthScan scan;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    const auto c = f.log_abs(n);
    if (!c) continue;
    const double x = static_cast<double>(n);
    scan.indices.push_back(n);
    scan.values.push_back(std::exp(std::log(x) / rho + *c / x));
  }
  return detail::finish_scan(std::move(scan), "type");
}

// ---- derivatives ---------------------------------------------------------

/// Coefficients of f': c_k[f'] = (k+1) c_{k+1}[f].
inline CoefficientSequence derivative_coeffs(const CoefficientSequence& f) {
  auto rule = [f](std::size_t k) -> LogCoeff {
    const auto c = f.log_abs(k + 1);
    if (!c) return std::nullopt;
    return std::log(static_cast<double>(k) + 1.0) + *c;
  };
  if (f.is_table()) {
    std::vector<LogCoeff> t;
    if (auto m = f.max_index())
      for (std::size_t k = 0; k < *m; ++k) t.push_back(rule(k));
    while (!t.empty() && !t.back()) t.pop_back();
    return CoefficientSequence::from_table(f.name() + "'", std::move(t), f.sign());
  }
  return CoefficientSequence::from_rule(f.name() + "'", rule, f.sign());
}

/// Inverse of `derivative_coeffs`: c_{k+1} = c_k[g]/(k+1), with c_0 supplied.
inline CoefficientSequence integral_coeffs(const CoefficientSequence& g, LogCoeff log_c0) {
  auto rule = [g, log_c0](std::size_t n) -> LogCoeff {
    if (n == 0) return log_c0;
    const auto c = g.log_abs(n - 1);
    if (!c) return std::nullopt;
    return *c - std::log(static_cast<double>(n));
  };
  if (g.is_table()) {
    std::vector<LogCoeff> t{log_c0};
    if (auto m = g.max_index())
      for (std::size_t n = 1; n <= *m + 1; ++n) t.push_back(rule(n));
    while (!t.empty() && !t.back()) t.pop_back();
    return CoefficientSequence::from_table("int " + g.name(), std::move(t), g.sign());
  }
  return CoefficientSequence::from_rule("int " + g.name(), rule, g.sign());
}

}  // namespace entire_growth::entire
