#pragma once

// Bilateral estimates between the maximal function and Taylor coefficients.
//
// Upper direction:   ln M_f(e^v) <= Lambda(v)   =>   ln|c_n| <= -Lambda*(n).
// Reverse direction: ln|c_n| <= -D(n)           =>   ln M_f(e^v) <= ln R_D(v)
//                    <= ln Y(eps) + D*(v / (1 - eps)),
// with R_D(v) = sum_n exp(n v - D(n)), Y = min(K, U) and
//   K(eps) = sum_n exp(-eps D(n)),
//   U(eps) = sum_n exp(D((1 - eps) n) - D(n)).
// D here is the coefficient decay exponent; its conjugate D* plays the role of
// the growth profile Lambda.

#include "entire_growth/entire.hpp"
#include "entire_growth/error.hpp"
#include "entire_growth/legendre.hpp"
#include "entire_growth/logsum.hpp"
#include "entire_growth/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace entire_growth::bounds {

/// A real function of one variable with its validity interval; +inf outside.
/// Used both for growth profiles Lambda(v) and for decay exponents D(n).
struct GrowthFunction {
  std::string name;
  std::function<double(double)> eval;
  legendre::Interval domain{};
  bool convex = true;

  double operator()(double v) const {
    if (v < domain.lo || v > domain.hi) return kInf;
    return eval(v);
  }
};

/// Lambda(v) = C e^{rho v}: ln M ~ C r^rho.
inline GrowthFunction power_of_exp(double c, double rho) {
  if (!(c > 0.0) || !(rho > 0.0)) throw Error(ErrorKind::input, "power_of_exp needs C > 0 and rho > 0");
  return {"power_of_exp", [c, rho](double v) { return c * std::exp(rho * v); }};
}

/// Lambda(v) = C max(v, 0)^m: ln M ~ C (ln r)^m for r >= 1.
inline GrowthFunction power_log(double c, double m) {
  if (!(c > 0.0) || !(m > 1.0)) throw Error(ErrorKind::input, "power_log needs C > 0 and m > 1");
  return {"power_log", [c, m](double v) { return v > 0.0 ? c * std::pow(v, m) : 0.0; }};
}

/// Lambda(v) = C5 exp(C6 e^v): ln M ~ C5 e^{C6 r}.
inline GrowthFunction exp_of_exp(double c5, double c6) {
  if (!(c5 > 0.0) || !(c6 > 0.0)) throw Error(ErrorKind::input, "exp_of_exp needs C5 > 0 and C6 > 0");
  return {"exp_of_exp", [c5, c6](double v) { return c5 * std::exp(c6 * std::exp(v)); }};
}

/// Lambda(v) = lambda (e^v - 1), the growth profile of a Poisson generating function.
inline GrowthFunction shifted_exp(double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::input, "shifted_exp needs lambda > 0");
  return {"shifted_exp", [lambda](double v) { return lambda * std::expm1(v); }};
}

/// Lambda(v) = c v.
inline GrowthFunction linear(double c) {
  return {"linear", [c](double v) { return c * v; }};
}

/// D(x) = x ln x - x on [0, inf), D(0) = 0: the Stirling decay of 1/n!.
inline GrowthFunction stirling_decay() {
  return {"stirling_decay", [](double x) { return x > 0.0 ? x * std::log(x) - x : 0.0; }, {0.0, kInf}};
}

/// Piecewise-linear interpolation of samples; +inf outside the window.
inline GrowthFunction sampled(std::string name, legendre::SampledFunction1D samples, bool convex) {
  const legendre::Interval dom{samples.lo(), samples.hi()};
  return {std::move(name), [s = std::move(samples)](double v) { return s.value_at(v); }, dom, convex};
}

struct BoundOptions {
  legendre::WindowOptions window{};
  SeriesOptions series{};
  std::size_t eps_points = 199;  // eps_j = j / (eps_points + 1)
  std::vector<double> eps_grid;  // explicit grid, replaces eps_points when non-empty
  bool refine_eps = true;
  std::size_t shift_scan = 10'000;
};

inline std::vector<double> default_eps_grid(std::size_t points) {
  if (points == 0) throw Error(ErrorKind::input, "eps grid needs at least one point");
  std::vector<double> grid(points);
  for (std::size_t j = 0; j < points; ++j) grid[j] = static_cast<double>(j + 1) / static_cast<double>(points + 1);
  return grid;
}

inline std::vector<double> eps_grid_for(const BoundOptions& opt) {
  if (opt.eps_grid.empty()) return default_eps_grid(opt.eps_points);
  for (std::size_t j = 0; j < opt.eps_grid.size(); ++j) {
    if (!(opt.eps_grid[j] > 0.0 && opt.eps_grid[j] < 1.0)) throw Error(ErrorKind::input, "eps grid values must lie in (0, 1)");
    if (j > 0 && !(opt.eps_grid[j] > opt.eps_grid[j - 1])) throw Error(ErrorKind::input, "eps grid must be increasing");
  }
  return opt.eps_grid;
}

// ---- upper coefficient bound ---------------------------------------------

struct CoeffBound {
  double log_bound = 0.0;  // -Lambda*(n)
  double argmax_v = 0.0;
  bool saturated = false;  // still valid, possibly loose
};

/// -Lambda*(n): any f with ln M_f(e^v) <= Lambda(v) has ln|c_n| below this.
inline CoeffBound coeff_upper_bound(const GrowthFunction& lambda, double n, const BoundOptions& opt = {}) {
  if (!(n >= 0.0)) throw Error(ErrorKind::input, "index must be non-negative");
  const auto pc = legendre::conjugate_at([&](double v) { return lambda(v); }, n, lambda.domain, opt.window);
  return {-pc.value, pc.argmax, pc.saturated};
}

/// Conjugate Lambda*(y) of a growth function, with saturation flag.
inline legendre::PointConjugate conjugate(const GrowthFunction& g, double y, const BoundOptions& opt = {}) {
  return legendre::conjugate_at([&](double v) { return g(v); }, y, g.domain, opt.window);
}

// ---- the K, U and R series -----------------------------------------------

namespace detail {

inline void check_eps(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw Error(ErrorKind::input, "eps must lie in [0, 1)");
}

inline double finite_or_inf(const SeriesResult& r) {
  return r.status == SeriesStatus::converged ? r.log_sum : kInf;
}

}  // namespace detail

using Evaluator = std::function<double(double)>;

/// ln K(eps) = ln sum_n exp(-eps q(n)); +inf when the series diverges.
inline double log_k_sum(const Evaluator& q, double eps, const SeriesOptions& opt = {}) {
  detail::check_eps(eps);
  return detail::finite_or_inf(sum_log_series(
      [&](std::size_t n) {
        const double v = q(static_cast<double>(n));
        return v == kInf ? kNegInf : -eps * v;
      },
      opt));
}

/// ln U(eps) = ln sum_n exp(q((1 - eps) n) - q(n)); +inf when divergent.
inline double log_u_sum(const Evaluator& q, double eps, const SeriesOptions& opt = {}) {
  detail::check_eps(eps);
  return detail::finite_or_inf(sum_log_series(
      [&](std::size_t n) {
        const double x = static_cast<double>(n);
        const double hi = q(x);
        if (hi == kInf) return kNegInf;
        return q((1.0 - eps) * x) - hi;
      },
      opt));
}

inline double k_sum(const Evaluator& q, double eps, const SeriesOptions& opt = {}) {
  return std::exp(log_k_sum(q, eps, opt));
}
inline double u_sum(const Evaluator& q, double eps, const SeriesOptions& opt = {}) {
  return std::exp(log_u_sum(q, eps, opt));
}

/// ln R_D(v) = ln sum_n exp(n v - D(n)) by direct summation; +inf when divergent.
inline double r_sum(const GrowthFunction& decay, double v, const SeriesOptions& opt = {}) {
  return detail::finite_or_inf(sum_log_series(
      [&](std::size_t n) {
        const double x = static_cast<double>(n);
        const double d = decay(x);
        return d == kInf ? kNegInf : x * v - d;
      },
      opt));
}

// ---- reverse bound ---------------------------------------------------------

struct EpsilonReport {
  std::vector<double> eps_grid;
  std::vector<double> log_k;  // ln K(eps) of the shifted decay
  std::vector<double> log_u;
  std::vector<double> log_y;  // min(log_k, log_u)
  std::vector<double> objective;  // bound on ln M_f(e^v) per eps
  double eps_star = 0.0;
  double log_s0 = kInf;  // ln Y(eps_star)
  double shift = 0.0;    // constant added to D so that min_n D(n) = 0
  double c_eff = 1.0;    // 1 / (1 - eps_star)
};

struct MaxBound {
  double log_bound = kInf;
  EpsilonReport report;
};

/// Smallest value of D on the non-negative integers, scanned until D has been
/// positive and increasing for a full tail run.
inline double decay_minimum(const GrowthFunction& decay, const BoundOptions& opt = {}) {
  double best = kInf;
  double prev = kNegInf;
  std::size_t run = 0;
  for (std::size_t n = 0; n <= opt.shift_scan; ++n) {
    const double d = decay(static_cast<double>(n));
    if (std::isnan(d)) throw Error(ErrorKind::input, "decay exponent is NaN at n=" + std::to_string(n));
    best = std::min(best, d);
    run = (d > 0.0 && d >= prev) ? run + 1 : 0;
    prev = d;
    if (run >= opt.series.tail_run) break;
  }
  if (!std::isfinite(best)) throw Error(ErrorKind::input, "decay exponent has no finite value on the integers");
  return best;
}

/// Objective per eps, in the original (unshifted) normalisation:
///   shift + ln Y'(eps) + max(D'*(y), (1 - eps) D'*(y)),  y = v / (1 - eps),
/// where D' = D + shift >= 0. For D'*(y) >= 0 this is ln Y(eps) + D*(y).
/// The max() keeps the bound valid for negative v where D'*(y) < 0: the K
/// route then carries the smaller factor (1 - eps).
inline MaxBound max_function_upper_bound(const GrowthFunction& decay, double v, const BoundOptions& opt = {}) {
  if (!std::isfinite(v)) throw Error(ErrorKind::input, "v must be finite");
  const double shift = -decay_minimum(decay, opt);
  auto shifted = [&](double x) {
    const double d = decay(x);
    return d == kInf ? kInf : d + shift;
  };

  struct Point {
    double log_k, log_u, log_y, objective;
  };
  auto evaluate = [&](double eps) -> Point {
    Point p{};
    p.log_k = log_k_sum(shifted, eps, opt.series);
    p.log_u = log_u_sum(shifted, eps, opt.series);
    p.log_y = std::min(p.log_k, p.log_u);
    if (p.log_y == kInf) {
      p.objective = kInf;
      return p;
    }
    const auto pc = legendre::conjugate_at(shifted, v / (1.0 - eps), decay.domain, opt.window);
    if (pc.saturated || !std::isfinite(pc.value)) {
      p.objective = kInf;
      return p;
    }
    p.objective = shift + p.log_y + std::max(pc.value, (1.0 - eps) * pc.value);
    return p;
  };

  MaxBound out;
  auto& rep = out.report;
  rep.shift = shift;
  rep.eps_grid = eps_grid_for(opt);
  std::size_t best = 0;
  for (std::size_t j = 0; j < rep.eps_grid.size(); ++j) {
    const Point p = evaluate(rep.eps_grid[j]);
    rep.log_k.push_back(p.log_k);
    rep.log_u.push_back(p.log_u);
    rep.log_y.push_back(p.log_y);
    rep.objective.push_back(p.objective);
    if (p.objective < rep.objective[best]) best = j;
  }
  if (rep.objective[best] == kInf)
    throw Error(ErrorKind::no_finite_bound, "Y(eps) is infinite (or the conjugate saturated) for every eps on the grid");

  rep.eps_star = rep.eps_grid[best];
  rep.log_s0 = rep.log_y[best];
  out.log_bound = rep.objective[best];

  if (opt.refine_eps && rep.eps_grid.size() > 1) {
    const double a = best > 0 ? rep.eps_grid[best - 1] : rep.eps_grid[best] / 2.0;
    const double b = best + 1 < rep.eps_grid.size() ? rep.eps_grid[best + 1] : (rep.eps_grid[best] + 1.0) / 2.0;
    const ArgMax m = maximize_on_interval(
        [&](double eps) {
          const double o = evaluate(eps).objective;
          return o == kInf ? kNegInf : -o;
        },
        a, b, 60);
    if (std::isfinite(m.value) && -m.value < out.log_bound) {
      const Point p = evaluate(m.x);
      rep.eps_star = m.x;
      rep.log_s0 = p.log_y;
      out.log_bound = p.objective;
    }
  }
  rep.c_eff = 1.0 / (1.0 - rep.eps_star);
  return out;
}

/// First index n <= n_max with ln|c_n| > -D(n) (beyond a relative slack), if any.
inline std::optional<std::size_t> find_decay_violation(const entire::CoefficientSequence& f,
                                                       const GrowthFunction& decay, std::size_t n_max,
                                                       double rel_slack = 1e-12) {
  for (std::size_t n = 0; n <= n_max; ++n) {
    const auto c = f.log_abs(n);
    if (!c) continue;
    const double d = decay(static_cast<double>(n));
    if (*c > -d + rel_slack * std::max(1.0, std::abs(d))) return n;
  }
  return std::nullopt;
}

// ---- gamma condition -------------------------------------------------------

struct GammaReport {
  std::vector<double> v_grid;
  std::vector<double> ratios;  // Lambda(v / (1 - eps0)) / Lambda(v)
  double gamma = 0.0;
  bool holds = false;
};

/// sup over the grid of Lambda(v/(1-eps0)) / Lambda(v). `holds` is false when
/// the last quarter of the grid pushes the ratio above everything before it,
/// i.e. the ratio is still growing where the grid ends.
inline GammaReport gamma_condition(const GrowthFunction& lambda, double eps0, std::span<const double> v_grid) {
  if (!(eps0 > 0.0 && eps0 < 1.0)) throw Error(ErrorKind::input, "eps0 must lie in (0, 1)");
  if (v_grid.size() < 2) throw Error(ErrorKind::input, "gamma condition needs at least two grid points");
  GammaReport rep;
  rep.v_grid.assign(v_grid.begin(), v_grid.end());
  for (double v : v_grid) {
    if (!(v >= 1.0)) throw Error(ErrorKind::input, "gamma condition grid must lie in [1, inf)");
    const double base = lambda(v);
    if (!(base > 0.0)) throw Error(ErrorKind::invalid_growth, "Lambda(v) <= 0 at v=" + std::to_string(v));
    rep.ratios.push_back(lambda(v / (1.0 - eps0)) / base);
  }
  const std::size_t n = rep.ratios.size();
  const std::size_t head = std::max<std::size_t>(1, n - std::max<std::size_t>(1, n / 4));
  double head_max = kNegInf, tail_max = kNegInf;
  bool finite = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(rep.ratios[i])) finite = false;
    (i < head ? head_max : tail_max) = std::max(i < head ? head_max : tail_max, rep.ratios[i]);
  }
  rep.gamma = std::max(head_max, tail_max);
  rep.holds = finite && tail_max <= head_max * (1.0 + 1e-9);
  return rep;
}

// ---- Tauberian diagnostics -------------------------------------------------

struct TauberianReport {
  std::vector<double> r_grid;
  std::vector<double> lhs_ratios;  // ln M_f(r) / Lambda(ln r)
  std::vector<double> n_grid;      // indices kept
  std::vector<double> rhs_ratios;  // |ln 1/|c_n|| / Lambda*(n)
  std::vector<double> excluded_n;  // zero coefficient, saturated or non-positive Lambda*
  double lhs_terminal = 0.0;       // mean over the terminal window
  double rhs_terminal = 0.0;
  double terminal_difference = 0.0;
  double gamma_estimate = 0.0;
  bool gamma_holds = false;
  bool lhs_exact = true;  // false when ln M is only the coefficient-sum upper bound
};

struct TauberianOptions {
  BoundOptions bound{};
  std::size_t terminal_window = 3;
  double gamma_eps0 = 0.5;
};

/// Both sides of the Tauberian ratio identity on the supplied grids. Limits are
/// not claimed; the report carries the sequences and their terminal means.
inline TauberianReport tauberian_report(const entire::CoefficientSequence& f, const GrowthFunction& lambda,
                                        std::span<const double> r_grid, std::span<const double> n_grid,
                                        const TauberianOptions& opt = {}) {
  if (entire::polynomial_degree(f)) throw Error(ErrorKind::precondition, "'" + f.name() + "' is a polynomial");
  if (r_grid.empty() || n_grid.empty()) throw Error(ErrorKind::input, "empty grid");
  TauberianReport rep;
  rep.r_grid.assign(r_grid.begin(), r_grid.end());
  std::vector<double> v_for_gamma;
  for (double r : r_grid) {
    const double lv = lambda(std::log(r));
    if (!(lv > 0.0)) throw Error(ErrorKind::precondition, "Lambda(ln r) <= 0 at r=" + std::to_string(r));
    const auto lm = entire::log_max_function(f, r, opt.bound.series);
    rep.lhs_exact = rep.lhs_exact && lm.exact;
    rep.lhs_ratios.push_back(lm.value / lv);
    if (std::log(r) >= 1.0) v_for_gamma.push_back(std::log(r));
  }
  for (double n : n_grid) {
    if (!(n >= 0.0) || n != std::floor(n)) throw Error(ErrorKind::input, "n grid must hold non-negative integers");
    const auto c = f.log_abs(static_cast<std::size_t>(n));
    const auto cb = coeff_upper_bound(lambda, n, opt.bound);
    const double lstar = -cb.log_bound;
    if (!c || cb.saturated || !(lstar > 0.0)) {
      rep.excluded_n.push_back(n);
      continue;
    }
    rep.n_grid.push_back(n);
    rep.rhs_ratios.push_back(std::abs(*c) / lstar);
  }
  auto tail_mean = [&](const std::vector<double>& xs) {
    if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
    const std::size_t w = std::min(std::max<std::size_t>(opt.terminal_window, 1), xs.size());
    double s = 0.0;
    for (std::size_t i = xs.size() - w; i < xs.size(); ++i) s += xs[i];
    return s / static_cast<double>(w);
  };
  rep.lhs_terminal = tail_mean(rep.lhs_ratios);
  rep.rhs_terminal = tail_mean(rep.rhs_ratios);
  rep.terminal_difference = std::abs(rep.lhs_terminal - rep.rhs_terminal);
  if (v_for_gamma.size() >= 2) {
    std::sort(v_for_gamma.begin(), v_for_gamma.end());
    try {
      const auto g = gamma_condition(lambda, opt.gamma_eps0, v_for_gamma);
      rep.gamma_estimate = g.gamma;
      rep.gamma_holds = g.holds;
    } catch (const Error&) {
      rep.gamma_holds = false;
    }
  }
  return rep;
}

}  // namespace entire_growth::bounds
