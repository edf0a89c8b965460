#pragma once

// Regularly varying growth scales and the worked growth/decay pairs:
//   log-power growth   ln M ~ C3 (ln r)^m      <->  ln 1/|c_n| ~ C4 n^{m'}
//   finite order       ln M ~ C4 r^rho         <->  |c_n| <= (n/(C4 rho))^{-n/rho} e^{n/rho}
//   exponential level  ln M <= C5 e^{C6 r}     <->  |c_n| <= C7 (ln n)^{-n}

#include "entire_growth/bounds.hpp"
#include "entire_growth/error.hpp"
#include "entire_growth/legendre.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace entire_growth::scales {

enum class ScaleKind {
  phi,  // (1/m) lambda^m L(lambda)
  psi,  // C1 lambda^m (ln lambda)^q
};

/// lambda^m times the slowly varying factor L(lambda) = (ln lambda)^q.
struct RegVarScale {
  ScaleKind kind = ScaleKind::phi;
  double m = 2.0;
  double q = 0.0;
  double c1 = 1.0;  // psi only

  static RegVarScale phi(double m, double q = 0.0) { return {ScaleKind::phi, m, q, 1.0}; }
  static RegVarScale psi(double m, double q, double c1 = 1.0) { return {ScaleKind::psi, m, q, c1}; }

  void validate() const {
    if (!(m > 1.0)) throw Error(ErrorKind::input, "scale exponent m must exceed 1");
    if (!(q >= 0.0)) throw Error(ErrorKind::input, "log power q must be non-negative");
    if (kind == ScaleKind::psi && !(c1 > 0.0)) throw Error(ErrorKind::input, "psi constant must be positive");
  }

  double conjugate_exponent() const { return m / (m - 1.0); }

  /// Lower end of the evaluation domain: 1 without log factor, e with one.
  double domain_lo() const { return q == 0.0 ? 1.0 : std::numbers::e; }

  double operator()(double lambda) const {
    if (lambda < domain_lo()) return kInf;
    const double l = q == 0.0 ? 1.0 : std::pow(std::log(lambda), q);
    const double lead = kind == ScaleKind::phi ? 1.0 / m : c1;
    return lead * std::pow(lambda, m) * l;
  }
};

/// Closed-form asymptotic of the conjugate at x >= e:
///   phi*: (1/m') x^{m'} L(x^{1/(m-1)})^{-1/(m-1)}
///   psi*: C2 x^{m'} (ln x)^{-q/(m-1)},  C2 = (1/m') (m C1)^{-1/(m-1)} (m-1)^{q/(m-1)}
/// C2 follows from rewriting psi as phi with L = m C1 (ln lambda)^q.
inline double conjugate_asymptotic(const RegVarScale& s, double x) {
  s.validate();
  if (!(x >= std::numbers::e)) throw Error(ErrorKind::input, "asymptotic form needs x >= e");
  const double mp = s.conjugate_exponent();
  const double k = 1.0 / (s.m - 1.0);
  if (s.kind == ScaleKind::phi) {
    const double l = s.q == 0.0 ? 1.0 : std::pow(k * std::log(x), s.q);
    return std::pow(x, mp) * std::pow(l, -k) / mp;
  }
  const double c2 = std::pow(s.m * s.c1, -k) * std::pow(s.m - 1.0, s.q * k) / mp;
  return c2 * std::pow(x, mp) * std::pow(std::log(x), -s.q * k);
}

/// Numerical conjugate sup_{lambda >= domain_lo} (x lambda - s(lambda)).
inline double conjugate_numeric(const RegVarScale& s, double x, const legendre::WindowOptions& opt = {}) {
  s.validate();
  legendre::WindowOptions w = opt;
  w.initial_lo = s.domain_lo();
  w.initial_hi = s.domain_lo() + 32.0;
  w.hard_cap = 1e12;
  return legendre::conjugate_at([&](double l) { return s(l); }, x, {s.domain_lo(), kInf}, w).value;
}

/// Local log-log slopes between consecutive positive samples; entry i uses
/// points i-1 and i (entry 0 is NaN).
inline std::vector<double> exponent_fit(std::span<const double> xs, std::span<const double> ys) {
  std::vector<double> out(xs.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] > 0.0 && xs[i - 1] > 0.0 && ys[i] > 0.0 && ys[i - 1] > 0.0 && xs[i] != xs[i - 1])
      out[i] = (std::log(ys[i]) - std::log(ys[i - 1])) / (std::log(xs[i]) - std::log(xs[i - 1]));
  }
  return out;
}

// ---- log-power growth ----------------------------------------------------

struct Example31Report {
  double m = 0.0, c3 = 0.0, m_prime = 0.0;
  std::vector<double> n_grid;
  std::vector<double> lambda_star;   // Lambda*(n)
  std::vector<double> log_bound;     // -Lambda*(n)
  std::vector<double> exponent_fit;  // local slope of ln Lambda* against ln n
  std::vector<double> c4;            // Lambda*(n) / n^{m'}
};

inline Example31Report example_31_check(double m, double c3, std::span<const double> n_grid,
                                        const bounds::BoundOptions& opt = {}) {
  const auto lambda = bounds::power_log(c3, m);
  Example31Report rep;
  rep.m = m;
  rep.c3 = c3;
  rep.m_prime = m / (m - 1.0);
  rep.n_grid.assign(n_grid.begin(), n_grid.end());
  for (double n : n_grid) {
    const auto b = bounds::coeff_upper_bound(lambda, n, opt);
    rep.log_bound.push_back(b.log_bound);
    rep.lambda_star.push_back(-b.log_bound);
    rep.c4.push_back(n > 0.0 ? -b.log_bound / std::pow(n, rep.m_prime) : std::numeric_limits<double>::quiet_NaN());
  }
  rep.exponent_fit = exponent_fit(rep.n_grid, rep.lambda_star);
  return rep;
}

// ---- finite order --------------------------------------------------------

/// ln of (n/(C4 rho))^{-n/rho} e^{n/rho}; 0 at n = 0.
inline double example_32_bound(double rho, double c4, double n) {
  if (!(rho > 0.0) || !(c4 > 0.0)) throw Error(ErrorKind::input, "rho and C4 must be positive");
  if (!(n >= 0.0)) throw Error(ErrorKind::input, "index must be non-negative");
  if (n == 0.0) return 0.0;
  return -(n / rho) * std::log(n / (c4 * rho)) + n / rho;
}

/// rho^{-1} n ln n + gamma n ln ln n / rho - n / rho, the decay rate matching
/// ln M ~ rho^{-1} r^rho (ln r)^gamma. Needs n >= 3 so that ln ln n > 0.
inline double example_32_refined_rate(double rho, double gamma, double n) {
  if (!(rho > 0.0)) throw Error(ErrorKind::input, "rho must be positive");
  if (!(n >= 3.0)) throw Error(ErrorKind::input, "refined rate needs n >= 3");
  return (n * std::log(n) + gamma * n * std::log(std::log(n)) - n) / rho;
}

struct Example32Row {
  double n;
  double ln_abs_c;
  double log_bound;
  double slack;  // log_bound - ln|c_n|
};

inline std::vector<Example32Row> example_32_report(const entire::CoefficientSequence& f, double rho, double c4,
                                                   std::span<const double> n_grid) {
  std::vector<Example32Row> rows;
  for (double n : n_grid) {
    const auto c = f.log_abs(static_cast<std::size_t>(n));
    const double b = example_32_bound(rho, c4, n);
    const double lc = c ? *c : kNegInf;
    rows.push_back({n, lc, b, b - lc});
  }
  return rows;
}

// ---- exponential level ---------------------------------------------------

struct Example33Report {
  std::vector<double> n_grid;
  std::vector<double> log_bound;      // -Lambda*(n), Lambda = C5 exp(C6 e^v)
  std::vector<double> target;         // ln C7 - n ln ln n
  std::vector<double> leading_ratio;  // (-Lambda*(n)) / (-n ln ln n)
  std::vector<bool> saturated;
};

inline Example33Report example_33_check(double c5, double c6, double c7, std::span<const double> n_grid,
                                        const bounds::BoundOptions& opt = {}) {
  if (!(c7 > 0.0)) throw Error(ErrorKind::input, "C7 must be positive");
  const auto lambda = bounds::exp_of_exp(c5, c6);
  Example33Report rep;
  for (double n : n_grid) {
    if (!(n >= 3.0)) throw Error(ErrorKind::input, "exponential-level check needs n >= 3");
    auto b = bounds::coeff_upper_bound(lambda, n, opt);
    if (b.saturated) {
      auto wider = opt;
      wider.window.hard_cap *= 2.0;
      b = bounds::coeff_upper_bound(lambda, n, wider);
    }
    const double lead = n * std::log(std::log(n));
    rep.n_grid.push_back(n);
    rep.log_bound.push_back(b.log_bound);
    rep.target.push_back(std::log(c7) - lead);
    rep.leading_ratio.push_back(b.log_bound / -lead);
    rep.saturated.push_back(b.saturated);
  }
  return rep;
}

}  // namespace entire_growth::scales
