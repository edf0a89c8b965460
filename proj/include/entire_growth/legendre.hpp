#pragma once

// Young-Fenchel (Legendre) conjugation on sampled data.
//
//   g*(y) = sup_x ( x*y - g(x) )
//
// The 1-D transform runs on the lower convex hull of the sample epigraph and
// sweeps sorted queries with a monotone pointer, so a table of n samples and
// m queries costs O(n + m) on strictly convex data. Values are always produced
// by the expression `x * y - g` on an original sample, which keeps results
// bit-identical to the naive double loop.

#include "entire_growth/error.hpp"
#include "entire_growth/logsum.hpp"
#include "entire_growth/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace entire_growth::legendre {

namespace detail {

inline void require_increasing(std::span<const double> xs, const char* what) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i])) throw Error(ErrorKind::input, std::string(what) + " contains a non-finite value");
    if (i > 0 && !(xs[i] > xs[i - 1]))
      throw Error(ErrorKind::input, std::string(what) + " must be strictly increasing");
  }
}

}  // namespace detail

/// Samples (x_i, g(x_i)) with g in (-inf, +inf]; +inf marks points outside Dom[g].
class SampledFunction1D {
 public:
  SampledFunction1D(std::vector<double> xs, std::vector<double> gs) : xs_(std::move(xs)), gs_(std::move(gs)) {
    if (xs_.size() != gs_.size()) throw Error(ErrorKind::input, "xs and gs differ in length");
    if (xs_.size() < 2) throw Error(ErrorKind::input, "need at least two samples");
    detail::require_increasing(xs_, "xs");
    std::size_t finite = 0;
    for (double g : gs_) {
      if (std::isnan(g) || g == kNegInf) throw Error(ErrorKind::input, "g must lie in (-inf, +inf]");
      if (std::isfinite(g)) ++finite;
    }
    if (finite < 2) throw Error(ErrorKind::domain_degenerate, "fewer than two finite samples");
  }

  /// Samples `g` on `n` uniform points of [lo, hi]. NaN and -inf are mapped to +inf.
  static SampledFunction1D uniform(const std::function<double(double)>& g, double lo, double hi, std::size_t n) {
    if (n < 2 || !(hi > lo)) throw Error(ErrorKind::input, "uniform grid needs n >= 2 and hi > lo");
    std::vector<double> xs(n), gs(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
      const double v = g(xs[i]);
      gs[i] = (std::isnan(v) || v == kNegInf) ? kInf : v;
    }
    return SampledFunction1D(std::move(xs), std::move(gs));
  }

  std::span<const double> xs() const { return xs_; }
  std::span<const double> gs() const { return gs_; }
  std::size_t size() const { return xs_.size(); }
  double lo() const { return xs_.front(); }
  double hi() const { return xs_.back(); }

  /// Piecewise-linear interpolation; +inf if either bracketing sample is +inf.
  double value_at(double x) const {
    if (!(x >= lo() && x <= hi()))
      throw Error(ErrorKind::extrapolation, "query " + std::to_string(x) + " outside sampled window");
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t j = it == xs_.end() ? xs_.size() - 1 : static_cast<std::size_t>(it - xs_.begin());
    if (j == 0) j = 1;
    const std::size_t i = j - 1;
    if (x == xs_[i]) return gs_[i];
    if (x == xs_[j]) return gs_[j];
    if (gs_[i] == kInf || gs_[j] == kInf) return kInf;
    const double t = (x - xs_[i]) / (xs_[j] - xs_[i]);
    return gs_[i] + t * (gs_[j] - gs_[i]);
  }

 private:
  std::vector<double> xs_;
  std::vector<double> gs_;
};

struct ConjugateTable {
  std::vector<double> ys;
  std::vector<double> gstars;
  std::vector<double> argmax_xs;
  bool window_saturated = false;
};

/// Indices of the finite samples on the lower convex hull, left to right.
/// Collinear interior points are dropped.
inline std::vector<std::size_t> lower_hull(const SampledFunction1D& g) {
  const auto xs = g.xs();
  const auto gs = g.gs();
  std::vector<std::size_t> hull;
  hull.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(gs[i])) continue;
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull.back();
      // keep b only if (a, b, i) turns strictly left
      const double cross = (xs[b] - xs[a]) * (gs[i] - gs[a]) - (gs[b] - gs[a]) * (xs[i] - xs[a]);
      if (cross > 0.0) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }
  return hull;
}

/// Discrete conjugate max_i (x_i*y - g_i) at every query y (strictly increasing).
/// Ties resolve to the smallest x.
inline ConjugateTable conjugate_1d(const SampledFunction1D& g, std::span<const double> ys) {
  detail::require_increasing(ys, "ys");
  const auto xs = g.xs();
  const auto gs = g.gs();
  const auto hull = lower_hull(g);
  auto value = [&](std::size_t i, double y) { return xs[i] * y - gs[i]; };

  ConjugateTable out;
  out.ys.assign(ys.begin(), ys.end());
  out.gstars.resize(ys.size());
  out.argmax_xs.resize(ys.size());

  std::size_t h = 0;
  for (std::size_t q = 0; q < ys.size(); ++q) {
    const double y = ys[q];
    while (h + 1 < hull.size() && value(hull[h + 1], y) > value(hull[h], y)) ++h;
    // exact pass over the original samples spanned by the neighbouring hull edges
    const std::size_t first = h > 0 ? hull[h - 1] : hull[h];
    const std::size_t last = h + 1 < hull.size() ? hull[h + 1] : hull[h];
    std::size_t best = hull[h];
    double best_val = value(best, y);
    for (std::size_t i = first; i <= last; ++i) {
      if (!std::isfinite(gs[i])) continue;
      const double v = value(i, y);
      if (v > best_val || (v == best_val && i < best)) {
        best = i;
        best_val = v;
      }
    }
    out.gstars[q] = best_val;
    out.argmax_xs[q] = xs[best];
  }
  return out;
}

/// (g*)* on `xs_out`: the lower convex envelope of the finite samples, +inf
/// outside their x-range. Computed as a second conjugation over the hull-edge
/// slopes, which are exactly the breakpoints of the piecewise-linear g*.
inline ConjugateTable biconjugate_1d(const SampledFunction1D& g, std::span<const double> xs_out) {
  detail::require_increasing(xs_out, "xs_out");
  const auto xs = g.xs();
  const auto gs = g.gs();
  const auto hull = lower_hull(g);

  std::vector<double> slopes;
  slopes.reserve(hull.size());
  for (std::size_t j = 0; j + 1 < hull.size(); ++j) {
    const double s = (gs[hull[j + 1]] - gs[hull[j]]) / (xs[hull[j + 1]] - xs[hull[j]]);
    if (slopes.empty() || s > slopes.back()) slopes.push_back(s);
  }
  const ConjugateTable first = conjugate_1d(g, slopes);
  const double x_min = xs[hull.front()];
  const double x_max = xs[hull.back()];

  ConjugateTable out;
  out.ys.assign(xs_out.begin(), xs_out.end());
  out.gstars.resize(xs_out.size());
  out.argmax_xs.resize(xs_out.size());
  for (std::size_t q = 0; q < xs_out.size(); ++q) {
    const double x = xs_out[q];
    if (x < x_min || x > x_max) {
      out.gstars[q] = kInf;
      out.argmax_xs[q] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double best = kNegInf;
    double arg = slopes.front();
    for (std::size_t j = 0; j < slopes.size(); ++j) {
      const double v = slopes[j] * x - first.gstars[j];
      if (v > best) {
        best = v;
        arg = slopes[j];
      }
    }
    out.gstars[q] = best;
    out.argmax_xs[q] = arg;
  }
  return out;
}

/// g(gamma*x) + g*(y/gamma) - x*y; non-negative up to rounding.
inline double young_gap(const SampledFunction1D& g, double x, double y, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw Error(ErrorKind::input, "gamma must be positive");
  const double gx = g.value_at(gamma * x);
  const double q[1] = {y / gamma};
  const double gstar = conjugate_1d(g, q).gstars[0];
  return gx + gstar - x * y;
}

/// Second-difference convexity test on a conjugate table; tolerance is
/// relative to max |g*| over the finite entries.
inline bool is_discrete_convex(std::span<const double> ys, std::span<const double> vals, double rel_tol = 1e-12) {
  double scale = 0.0;
  for (double v : vals)
    if (std::isfinite(v)) scale = std::max(scale, std::abs(v));
  const double tol = rel_tol * std::max(scale, 1.0);
  for (std::size_t i = 1; i + 1 < vals.size(); ++i) {
    if (!std::isfinite(vals[i - 1]) || !std::isfinite(vals[i]) || !std::isfinite(vals[i + 1])) continue;
    // slope increase across ys[i], scaled to a value difference
    const double left = (vals[i] - vals[i - 1]) / (ys[i] - ys[i - 1]);
    const double right = (vals[i + 1] - vals[i]) / (ys[i + 1] - ys[i]);
    if ((right - left) * std::min(ys[i] - ys[i - 1], ys[i + 1] - ys[i]) < -tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Pointwise conjugate of a callable on an adaptively widened window.

struct Interval {
  double lo = kNegInf;
  double hi = kInf;
};

struct WindowOptions {
  double initial_lo = -16.0;
  double initial_hi = 16.0;
  double hard_cap = 700.0;  // |x| limit in log-domain units
  std::size_t samples = 257;
  bool refine = true;
};

struct PointConjugate {
  double value = kNegInf;
  double argmax = 0.0;
  bool saturated = false;  // argmax pinned at the hard cap
};

/// sup_x (x*y - g(x)) for x in `domain`, searched on a sampled window that
/// doubles toward whichever side holds the argmax until the argmax is interior,
/// sits on a finite domain edge, or hits the hard cap. The grid maximiser is
/// then polished by Brent's method on the neighbouring cells.
inline PointConjugate conjugate_at(const std::function<double(double)>& g, double y, Interval domain = {},
                                   const WindowOptions& opt = {}) {
  const double dom_lo = std::max(domain.lo, -opt.hard_cap);
  const double dom_hi = std::min(domain.hi, opt.hard_cap);
  if (!(dom_hi > dom_lo)) throw Error(ErrorKind::input, "empty conjugation domain");
  double lo = std::clamp(opt.initial_lo, dom_lo, dom_hi);
  double hi = std::clamp(opt.initial_hi, dom_lo, dom_hi);
  if (!(hi > lo)) {
    const double width = opt.initial_hi - opt.initial_lo;
    if (lo == dom_lo) hi = std::min(dom_hi, lo + width);
    else lo = std::max(dom_lo, hi - width);
  }
  auto objective = [&](double x) {
    const double v = g(x);
    if (std::isnan(v) || v == kInf) return kNegInf;
    return x * y - v;
  };

  for (;;) {
    const auto sampled = SampledFunction1D::uniform(g, lo, hi, opt.samples);
    const double q[1] = {y};
    const auto tab = conjugate_1d(sampled, q);
    const auto xs = sampled.xs();
    const std::size_t k = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), tab.argmax_xs[0]) - xs.begin());
    const double width = hi - lo;
    if (k == 0 && lo > dom_lo) {
      lo = std::max(dom_lo, lo - width);
      continue;
    }
    if (k + 1 == xs.size() && hi < dom_hi) {
      hi = std::min(dom_hi, hi + width);
      continue;
    }

    PointConjugate res{tab.gstars[0], tab.argmax_xs[0], false};
    res.saturated = (k == 0 && dom_lo == -opt.hard_cap && domain.lo < -opt.hard_cap) ||
                    (k + 1 == xs.size() && dom_hi == opt.hard_cap && domain.hi > opt.hard_cap);
    if (opt.refine) {
      const double a = xs[k > 0 ? k - 1 : k];
      const double b = xs[k + 1 < xs.size() ? k + 1 : k];
      if (b > a) {
        const ArgMax best = maximize_on_interval(objective, a, b);
        if (best.value > res.value) {
          res.value = best.value;
          res.argmax = best.x;
        }
      }
    }
    return res;
  }
}

// ---------------------------------------------------------------------------
// d-dimensional conjugates (d <= 3).

inline constexpr std::size_t kMaxDimension = 3;

struct NdLimits {
  std::size_t max_elements = std::size_t{1} << 26;
  double max_work = 4e9;  // sample count times query count
};

/// Values of g on a product grid, last axis fastest. Optionally carries the
/// per-axis parts of a separable g(x) = sum_i g_i(x_i).
class SampledFunctionND {
 public:
  SampledFunctionND(std::vector<std::vector<double>> grids, std::vector<double> values)
      : grids_(std::move(grids)), values_(std::move(values)) {
    if (grids_.empty()) throw Error(ErrorKind::input, "dimension must be at least 1");
    if (grids_.size() > kMaxDimension) throw Error(ErrorKind::unsupported, "dimension above 3");
    std::size_t n = 1;
    for (const auto& axis : grids_) {
      if (axis.size() < 2) throw Error(ErrorKind::input, "each axis needs at least two points");
      detail::require_increasing(axis, "axis grid");
      n *= axis.size();
    }
    if (values_.size() != n) throw Error(ErrorKind::input, "value table does not match the product grid");
    for (double v : values_)
      if (std::isnan(v) || v == kNegInf) throw Error(ErrorKind::input, "g must lie in (-inf, +inf]");
  }

  static SampledFunctionND separable(std::vector<SampledFunction1D> parts) {
    if (parts.empty()) throw Error(ErrorKind::input, "dimension must be at least 1");
    if (parts.size() > kMaxDimension) throw Error(ErrorKind::unsupported, "dimension above 3");
    std::vector<std::vector<double>> grids;
    for (const auto& p : parts) grids.emplace_back(p.xs().begin(), p.xs().end());
    std::size_t n = 1;
    for (const auto& gr : grids) n *= gr.size();
    std::vector<double> values(n);
    std::vector<std::size_t> idx(parts.size());
    for (std::size_t flat = 0; flat < n; ++flat) {
      double s = 0.0;
      for (std::size_t a = 0; a < parts.size(); ++a) s += parts[a].gs()[idx[a]];
      values[flat] = s;
      increment(idx, grids);
    }
    SampledFunctionND out(std::move(grids), std::move(values));
    out.parts_ = std::move(parts);
    return out;
  }

  std::size_t dimension() const { return grids_.size(); }
  const std::vector<std::vector<double>>& grids() const { return grids_; }
  std::span<const double> values() const { return values_; }
  const std::optional<std::vector<SampledFunction1D>>& parts() const { return parts_; }

  double at(std::span<const std::size_t> idx) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < grids_.size(); ++a) flat = flat * grids_[a].size() + idx[a];
    return values_[flat];
  }

  /// Odometer step over a product grid (last axis fastest).
  static void increment(std::vector<std::size_t>& idx, const std::vector<std::vector<double>>& grids) {
    for (std::size_t a = grids.size(); a-- > 0;) {
      if (++idx[a] < grids[a].size()) return;
      idx[a] = 0;
    }
  }

 private:
  std::vector<std::vector<double>> grids_;
  std::vector<double> values_;
  std::optional<std::vector<SampledFunction1D>> parts_;
};

namespace detail {

inline std::size_t grid_size(const std::vector<std::vector<double>>& grids) {
  std::size_t n = 1;
  for (const auto& g : grids) n *= g.size();
  return n;
}

inline void check_query(const SampledFunctionND& g, const std::vector<std::vector<double>>& query,
                        const NdLimits& limits, bool brute) {
  if (query.size() != g.dimension()) throw Error(ErrorKind::input, "query dimension mismatch");
  for (const auto& axis : query) {
    if (axis.empty()) throw Error(ErrorKind::input, "empty query axis");
    require_increasing(axis, "query axis");
  }
  const std::size_t out = grid_size(query);
  if (out > limits.max_elements) throw Error(ErrorKind::resource, "output table exceeds memory limit");
  if (brute && static_cast<double>(out) * static_cast<double>(g.values().size()) > limits.max_work)
    throw Error(ErrorKind::resource, "brute-force work estimate exceeds limit");
}

}  // namespace detail

/// Product-grid maximisation of (x, y) - g(x); no separability shortcut.
inline SampledFunctionND conjugate_nd_brute(const SampledFunctionND& g, const std::vector<std::vector<double>>& query,
                                            const NdLimits& limits = {}) {
  detail::check_query(g, query, limits, true);
  const std::size_t d = g.dimension();
  const auto& grids = g.grids();
  const auto vals = g.values();
  const std::size_t n_samples = vals.size();

  // flatten sample coordinates once
  std::vector<double> coords(n_samples * d);
  {
    std::vector<std::size_t> idx(d);
    for (std::size_t s = 0; s < n_samples; ++s) {
      for (std::size_t a = 0; a < d; ++a) coords[s * d + a] = grids[a][idx[a]];
      SampledFunctionND::increment(idx, grids);
    }
  }

  std::vector<double> out(detail::grid_size(query));
  std::vector<std::size_t> qidx(d);
  for (double& result : out) {
    double y[kMaxDimension] = {};
    for (std::size_t a = 0; a < d; ++a) y[a] = query[a][qidx[a]];
    double best = kNegInf;
    for (std::size_t s = 0; s < n_samples; ++s) {
      if (vals[s] == kInf) continue;
      double dot = 0.0;
      for (std::size_t a = 0; a < d; ++a) dot += coords[s * d + a] * y[a];
      best = std::max(best, dot - vals[s]);
    }
    result = best;
    SampledFunctionND::increment(qidx, query);
  }
  return SampledFunctionND(query, std::move(out));
}

/// d-dimensional conjugate on a query product grid. Separable inputs use the
/// identity (sum_i g_i)* = sum_i g_i*, everything else goes to the brute path.
inline SampledFunctionND conjugate_nd(const SampledFunctionND& g, const std::vector<std::vector<double>>& query,
                                      const NdLimits& limits = {}) {
  if (!g.parts()) return conjugate_nd_brute(g, query, limits);
  detail::check_query(g, query, limits, false);
  const auto& parts = *g.parts();
  std::vector<ConjugateTable> axis_conj;
  axis_conj.reserve(parts.size());
  for (std::size_t a = 0; a < parts.size(); ++a) axis_conj.push_back(conjugate_1d(parts[a], query[a]));
  std::vector<double> out(detail::grid_size(query));
  std::vector<std::size_t> qidx(parts.size());
  for (double& result : out) {
    double s = 0.0;
    for (std::size_t a = 0; a < parts.size(); ++a) s += axis_conj[a].gstars[qidx[a]];
    result = s;
    SampledFunctionND::increment(qidx, query);
  }
  return SampledFunctionND(query, std::move(out));
}

struct PointConjugateND {
  double value = kNegInf;
  std::vector<double> argmax;
  bool saturated = false;
};

/// Pointwise conjugate of a callable g: R^d -> (-inf, +inf] with the same
/// window-doubling policy as `conjugate_at`, followed by cyclic coordinate
/// Brent refinement (exact for concave objectives).
inline PointConjugateND conjugate_at_nd(const std::function<double(std::span<const double>)>& g,
                                        std::span<const double> y, const WindowOptions& opt = {}) {
  const std::size_t d = y.size();
  if (d == 0) throw Error(ErrorKind::input, "dimension must be at least 1");
  if (d > kMaxDimension) throw Error(ErrorKind::unsupported, "dimension above 3");
  const std::size_t per_axis = d == 1 ? opt.samples : (d == 2 ? 81 : 33);
  std::vector<double> lo(d, opt.initial_lo), hi(d, opt.initial_hi);

  auto objective = [&](std::span<const double> x) {
    const double v = g(x);
    if (std::isnan(v) || v == kInf) return kNegInf;
    double dot = 0.0;
    for (std::size_t a = 0; a < d; ++a) dot += x[a] * y[a];
    return dot - v;
  };

  PointConjugateND res;
  std::vector<double> x(d);
  for (;;) {
    std::vector<std::size_t> idx(d), best_idx(d);
    double best = kNegInf;
    std::size_t total = 1;
    for (std::size_t a = 0; a < d; ++a) total *= per_axis;
    for (std::size_t s = 0; s < total; ++s) {
      for (std::size_t a = 0; a < d; ++a) x[a] = lo[a] + (hi[a] - lo[a]) * static_cast<double>(idx[a]) / (per_axis - 1);
      const double v = objective(x);
      if (v > best) {
        best = v;
        best_idx = idx;
      }
      for (std::size_t a = d; a-- > 0;) {
        if (++idx[a] < per_axis) break;
        idx[a] = 0;
      }
    }
    if (best == kNegInf) throw Error(ErrorKind::domain_degenerate, "objective is -inf on the whole window");
    bool widened = false;
    res.saturated = false;
    for (std::size_t a = 0; a < d; ++a) {
      const double width = hi[a] - lo[a];
      if (best_idx[a] == 0) {
        if (lo[a] > -opt.hard_cap) {
          lo[a] = std::max(-opt.hard_cap, lo[a] - width);
          widened = true;
        } else {
          res.saturated = true;
        }
      } else if (best_idx[a] + 1 == per_axis) {
        if (hi[a] < opt.hard_cap) {
          hi[a] = std::min(opt.hard_cap, hi[a] + width);
          widened = true;
        } else {
          res.saturated = true;
        }
      }
    }
    if (widened) continue;

    for (std::size_t a = 0; a < d; ++a)
      x[a] = lo[a] + (hi[a] - lo[a]) * static_cast<double>(best_idx[a]) / (per_axis - 1);
    res.value = best;
    if (opt.refine) {
      for (int sweep = 0; sweep < 30; ++sweep) {
        const double before = res.value;
        for (std::size_t a = 0; a < d; ++a) {
          const double step = (hi[a] - lo[a]) / (per_axis - 1);
          const double keep = x[a];
          auto along = [&](double t) {
            x[a] = t;
            const double v = objective(x);
            x[a] = keep;
            return v;
          };
          const ArgMax m = maximize_on_interval(along, std::max(lo[a], keep - step), std::min(hi[a], keep + step));
          if (m.value > res.value) {
            res.value = m.value;
            x[a] = m.x;
          }
        }
        if (res.value - before <= 1e-15 * std::max(1.0, std::abs(res.value))) break;
      }
    }
    res.argmax = x;
    return res;
  }
}

}  // namespace entire_growth::legendre
