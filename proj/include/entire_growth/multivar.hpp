#pragma once

// Functions of several complex variables, f(z) = sum_k c_k z^k over
// multi-indices k in N^d (d <= 3). Coordinates follow v = ln r componentwise.

#include "entire_growth/bounds.hpp"
#include "entire_growth/entire.hpp"
#include "entire_growth/error.hpp"
#include "entire_growth/legendre.hpp"
#include "entire_growth/logsum.hpp"

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace entire_growth::multivar {

using MultiIndex = std::vector<std::size_t>;

namespace detail {

inline void check_dimension(std::size_t d) {
  if (d == 0) throw Error(ErrorKind::input, "dimension must be at least 1");
  if (d > legendre::kMaxDimension) throw Error(ErrorKind::unsupported, "dimension above 3");
}

}  // namespace detail

class MultiCoefficientSequence {
 public:
  using Rule = std::function<entire::LogCoeff(std::span<const std::size_t>)>;

  MultiCoefficientSequence(std::size_t d, Rule rule) : d_(d), rule_(std::move(rule)) { detail::check_dimension(d); }

  /// c_k = prod_j a^{(j)}_{k_j}; ln|c_k| is the exact sum of the factor logs.
  static MultiCoefficientSequence factorized(std::vector<entire::CoefficientSequence> factors) {
    detail::check_dimension(factors.size());
    MultiCoefficientSequence out(factors.size(), [factors](std::span<const std::size_t> k) -> entire::LogCoeff {
      double s = 0.0;
      for (std::size_t j = 0; j < factors.size(); ++j) {
        const auto c = factors[j].log_abs(k[j]);
        if (!c) return std::nullopt;
        s += *c;
      }
      return s;
    });
    out.factors_ = std::move(factors);
    return out;
  }

  std::size_t dimension() const { return d_; }
  entire::LogCoeff log_abs(std::span<const std::size_t> k) const {
    if (k.size() != d_) throw Error(ErrorKind::input, "multi-index dimension mismatch");
    return rule_(k);
  }
  const std::optional<std::vector<entire::CoefficientSequence>>& factors() const { return factors_; }

 private:
  std::size_t d_;
  Rule rule_;
  std::optional<std::vector<entire::CoefficientSequence>> factors_;
};

class MultiGrowthFunction {
 public:
  using Eval = std::function<double(std::span<const double>)>;

  MultiGrowthFunction(std::size_t d, Eval eval) : d_(d), eval_(std::move(eval)) { detail::check_dimension(d); }

  static MultiGrowthFunction separable(std::vector<bounds::GrowthFunction> parts) {
    detail::check_dimension(parts.size());
    MultiGrowthFunction out(parts.size(), [parts](std::span<const double> v) {
      double s = 0.0;
      for (std::size_t j = 0; j < parts.size(); ++j) {
        const double p = parts[j](v[j]);
        if (p == kInf) return kInf;
        s += p;
      }
      return s;
    });
    out.parts_ = std::move(parts);
    return out;
  }

  std::size_t dimension() const { return d_; }
  double operator()(std::span<const double> v) const { return eval_(v); }
  const std::optional<std::vector<bounds::GrowthFunction>>& parts() const { return parts_; }

 private:
  std::size_t d_;
  Eval eval_;
  std::optional<std::vector<bounds::GrowthFunction>> parts_;
};

// ---- series over multi-indices ---------------------------------------------

/// ln sum_k exp(term(k)) with the 1-D truncation rule applied on every axis,
/// outermost axis first.
inline SeriesResult sum_multi_series(std::size_t d, const std::function<double(std::span<const std::size_t>)>& term,
                                     const SeriesOptions& opt = {}) {
  detail::check_dimension(d);
  MultiIndex k(d, 0);
  bool inner_failed = false;
  std::function<double(std::size_t)> level = [&](std::size_t axis) -> double {
    if (axis + 1 == d) {
      const auto r = sum_log_series(
          [&](std::size_t n) {
            k[axis] = n;
            return term(k);
          },
          opt);
      if (r.status != SeriesStatus::converged) inner_failed = true;
      return r.log_sum;
    }
    const auto r = sum_log_series(
        [&](std::size_t n) {
          k[axis] = n;
          return level(axis + 1);
        },
        opt);
    if (r.status != SeriesStatus::converged) inner_failed = true;
    return r.log_sum;
  };
  SeriesResult out;
  out.log_sum = level(0);
  out.status = inner_failed ? SeriesStatus::diverged : SeriesStatus::converged;
  if (inner_failed) out.log_sum = kInf;
  return out;
}

/// ln sum_k |c_k| r^k by direct multi-index summation.
inline double multi_log_max_function(const MultiCoefficientSequence& f, std::span<const double> r,
                                     const SeriesOptions& opt = {}) {
  if (r.size() != f.dimension()) throw Error(ErrorKind::input, "radius dimension mismatch");
  std::vector<double> lr;
  for (double x : r) {
    if (!(x > 0.0)) throw Error(ErrorKind::input, "radii must be positive");
    lr.push_back(std::log(x));
  }
  const auto res = sum_multi_series(
      f.dimension(),
      [&](std::span<const std::size_t> k) {
        const auto c = f.log_abs(k);
        if (!c) return kNegInf;
        double s = *c;
        for (std::size_t j = 0; j < k.size(); ++j) s += static_cast<double>(k[j]) * lr[j];
        return s;
      },
      opt);
  if (res.status != SeriesStatus::converged) throw Error(ErrorKind::truncation, "multi-index series did not converge");
  return res.log_sum;
}

// ---- coefficient bound -------------------------------------------------------

struct MultiCoeffBound {
  double log_bound = 0.0;  // -Lambda*(k)
  bool saturated = false;
};

/// -Lambda*(k) via the d-dimensional conjugate; separable inputs take the
/// per-axis path.
inline MultiCoeffBound multi_coeff_bound(const MultiGrowthFunction& lambda, std::span<const std::size_t> k,
                                         const bounds::BoundOptions& opt = {}) {
  if (k.size() != lambda.dimension()) throw Error(ErrorKind::input, "multi-index dimension mismatch");
  MultiCoeffBound out;
  if (lambda.parts()) {
    const auto& parts = *lambda.parts();
    for (std::size_t j = 0; j < parts.size(); ++j) {
      const auto b = bounds::coeff_upper_bound(parts[j], static_cast<double>(k[j]), opt);
      out.log_bound += b.log_bound;
      out.saturated = out.saturated || b.saturated;
    }
    return out;
  }
  std::vector<double> y(k.begin(), k.end());
  const auto pc = legendre::conjugate_at_nd([&](std::span<const double> v) { return lambda(v); }, y, opt.window);
  return {-pc.value, pc.saturated};
}

// ---- reverse bound -----------------------------------------------------------

namespace detail {

inline double separable_shift(const std::vector<bounds::GrowthFunction>& parts, const bounds::BoundOptions& opt) {
  double s = 0.0;
  for (const auto& p : parts) s -= bounds::decay_minimum(p, opt);
  return s;
}

inline double box_shift(const MultiGrowthFunction& decay, std::size_t side) {
  const std::size_t d = decay.dimension();
  std::vector<double> x(d, 0.0);
  std::vector<std::size_t> idx(d, 0);
  std::size_t total = 1;
  for (std::size_t a = 0; a < d; ++a) total *= side;
  double best = kInf;
  for (std::size_t s = 0; s < total; ++s) {
    for (std::size_t a = 0; a < d; ++a) x[a] = static_cast<double>(idx[a]);
    best = std::min(best, decay(x));
    for (std::size_t a = d; a-- > 0;) {
      if (++idx[a] < side) break;
      idx[a] = 0;
    }
  }
  if (!std::isfinite(best)) throw Error(ErrorKind::input, "decay exponent has no finite value on the index box");
  return -best;
}

}  // namespace detail

/// Multi-index analogue of `bounds::max_function_upper_bound`: min over the
/// eps grid of shift + ln Y'(eps) + max(D'*(y), (1-eps) D'*(y)), y = v/(1-eps).
/// Separable decays factor K and U into per-axis products and D* into a sum.
inline bounds::MaxBound multi_max_bound(const MultiGrowthFunction& decay, std::span<const double> v,
                                        const bounds::BoundOptions& opt = {}) {
  const std::size_t d = decay.dimension();
  if (v.size() != d) throw Error(ErrorKind::input, "v dimension mismatch");
  const bool sep = decay.parts().has_value();
  const double shift = sep ? detail::separable_shift(*decay.parts(), opt) : detail::box_shift(decay, d == 3 ? 48 : 128);

  struct Point {
    double log_k, log_u, log_y, objective;
  };
  auto evaluate = [&](double eps) -> Point {
    Point p{};
    std::vector<double> y(d);
    for (std::size_t a = 0; a < d; ++a) y[a] = v[a] / (1.0 - eps);
    double conj = 0.0;
    bool saturated = false;
    if (sep) {
      const auto& parts = *decay.parts();
      p.log_k = 0.0;
      p.log_u = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        const double sh = -bounds::decay_minimum(parts[a], opt);
        auto shifted = [&](double x) {
          const double val = parts[a](x);
          return val == kInf ? kInf : val + sh;
        };
        p.log_k += bounds::log_k_sum(shifted, eps, opt.series);
        p.log_u += bounds::log_u_sum(shifted, eps, opt.series);
        const auto pc = legendre::conjugate_at(shifted, y[a], parts[a].domain, opt.window);
        conj += pc.value;
        saturated = saturated || pc.saturated;
      }
    } else {
      auto shifted = [&](std::span<const double> x) {
        const double val = decay(x);
        return val == kInf ? kInf : val + shift;
      };
      auto at_index = [&](std::span<const std::size_t> k, double scale) {
        double x[legendre::kMaxDimension];
        for (std::size_t a = 0; a < d; ++a) x[a] = scale * static_cast<double>(k[a]);
        return shifted(std::span<const double>(x, d));
      };
      p.log_k = bounds::detail::finite_or_inf(sum_multi_series(
          d,
          [&](std::span<const std::size_t> k) {
            const double q = at_index(k, 1.0);
            return q == kInf ? kNegInf : -eps * q;
          },
          opt.series));
      p.log_u = bounds::detail::finite_or_inf(sum_multi_series(
          d,
          [&](std::span<const std::size_t> k) {
            const double q = at_index(k, 1.0);
            return q == kInf ? kNegInf : at_index(k, 1.0 - eps) - q;
          },
          opt.series));
      const auto pc = legendre::conjugate_at_nd(shifted, y, opt.window);
      conj = pc.value;
      saturated = pc.saturated;
    }
    p.log_y = std::min(p.log_k, p.log_u);
    p.objective = (p.log_y == kInf || saturated || !std::isfinite(conj))
                      ? kInf
                      : shift + p.log_y + std::max(conj, (1.0 - eps) * conj);
    return p;
  };

  bounds::MaxBound out;
  auto& rep = out.report;
  rep.shift = shift;
  rep.eps_grid = bounds::eps_grid_for(opt);
  std::size_t best = 0;
  for (std::size_t j = 0; j < rep.eps_grid.size(); ++j) {
    const Point p = evaluate(rep.eps_grid[j]);
    rep.log_k.push_back(p.log_k);
    rep.log_u.push_back(p.log_u);
    rep.log_y.push_back(p.log_y);
    rep.objective.push_back(p.objective);
    if (p.objective < rep.objective[best]) best = j;
  }
  if (rep.objective[best] == kInf) throw Error(ErrorKind::no_finite_bound, "Y(eps) infinite on the whole eps grid");
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

/// ln R(v) = ln sum_k exp((k, v) - D(k)) by direct multi-index summation.
inline double multi_r_sum(const MultiGrowthFunction& decay, std::span<const double> v, const SeriesOptions& opt = {}) {
  const std::size_t d = decay.dimension();
  if (v.size() != d) throw Error(ErrorKind::input, "v dimension mismatch");
  return bounds::detail::finite_or_inf(sum_multi_series(
      d,
      [&](std::span<const std::size_t> k) {
        double x[legendre::kMaxDimension];
        double dot = 0.0;
        for (std::size_t a = 0; a < d; ++a) {
          x[a] = static_cast<double>(k[a]);
          dot += x[a] * v[a];
        }
        const double q = decay(std::span<const double>(x, d));
        return q == kInf ? kNegInf : dot - q;
      },
      opt));
}

// ---- factorizable demonstration ------------------------------------------

struct FactorizableReport {
  double log_max_joint = 0.0;   // direct double-series value
  double log_max_split = 0.0;   // ln M_f1(r1) + ln M_f2(r2)
  double max_coeff_residual = 0.0;  // |ln|c_kl| - ln|a_k| - ln|b_l|| over the grid
  std::size_t grid_side = 0;
};

inline FactorizableReport factorizable_demo(const entire::CoefficientSequence& f1, const entire::CoefficientSequence& f2,
                                            double r1, double r2, std::size_t grid_side = 20,
                                            const SeriesOptions& opt = {}) {
  if (f1.sign() != entire::CoefficientSign::nonnegative || f2.sign() != entire::CoefficientSign::nonnegative)
    throw Error(ErrorKind::precondition, "factorizable demo needs nonnegative coefficients");
  const auto joint = MultiCoefficientSequence::factorized({f1, f2});
  // independent product rule, not routed through the factor list
  const MultiCoefficientSequence direct(2, [&](std::span<const std::size_t> k) -> entire::LogCoeff {
    const auto a = f1.log_abs(k[0]);
    const auto b = f2.log_abs(k[1]);
    if (!a || !b) return std::nullopt;
    return *a + *b;
  });
  FactorizableReport rep;
  rep.grid_side = grid_side;
  const double r[2] = {r1, r2};
  rep.log_max_joint = multi_log_max_function(direct, r, opt);
  rep.log_max_split = entire::log_max_function(f1, r1, opt).value + entire::log_max_function(f2, r2, opt).value;
  for (std::size_t k = 0; k < grid_side; ++k)
    for (std::size_t l = 0; l < grid_side; ++l) {
      const std::size_t idx[2] = {k, l};
      const auto c = joint.log_abs(idx);
      const auto a = f1.log_abs(k);
      const auto b = f2.log_abs(l);
      if (!c || !a || !b) {
        if (c.has_value() != (a.has_value() && b.has_value())) rep.max_coeff_residual = kInf;
        continue;
      }
      rep.max_coeff_residual = std::max(rep.max_coeff_residual, std::abs(*c - (*a + *b)));
    }
  return rep;
}

}  // namespace entire_growth::multivar
