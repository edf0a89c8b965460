#pragma once

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

namespace entire_growth {

struct ArgMax {
  double x;
  double value;
};

/// Brent maximisation of `f` on [a, b]. Non-finite objective values are
/// treated as -inf. Exact for concave `f` up to the bracket tolerance; for
/// other shapes it returns a local maximum inside the bracket.
template <class F>
ArgMax maximize_on_interval(F&& f, double a, double b, std::uintmax_t max_iter = 200) {
  auto neg = [&](double x) {
    const double v = f(x);
    return std::isfinite(v) ? -v : std::numeric_limits<double>::max();
  };
  const auto [x, nv] = boost::math::tools::brent_find_minima(neg, a, b, std::numeric_limits<double>::digits, max_iter);
  return {x, f(x)};
}

}  // namespace entire_growth
