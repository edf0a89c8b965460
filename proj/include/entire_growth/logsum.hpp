#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>

namespace entire_growth {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Streaming ln(sum exp(t_i)) with a running max shift. Terms equal to -inf
/// contribute nothing; a single +inf term makes the sum +inf.
class LogSumExp {
 public:
  void add(double t) {
    if (std::isnan(t)) {
      nan_ = true;
      return;
    }
    if (t == kNegInf) return;
    if (t == kInf) {
      max_ = kInf;
      return;
    }
    if (max_ == kInf) return;
    if (t > max_) {
      scaled_ = (max_ == kNegInf ? 0.0 : scaled_ * std::exp(max_ - t)) + 1.0;
      max_ = t;
    } else {
      scaled_ += std::exp(t - max_);
    }
  }

  double value() const {
    if (nan_) return std::numeric_limits<double>::quiet_NaN();
    if (max_ == kNegInf || max_ == kInf) return max_;
    return max_ + std::log(scaled_);
  }

 private:
  double max_ = kNegInf;
  double scaled_ = 0.0;
  bool nan_ = false;
};

/// Truncation policy shared by every infinite sum in the library.
struct SeriesOptions {
  double tail_log_gap = 45.0;        // a term is "small" when below log-sum - gap
  std::size_t tail_run = 50;         // consecutive small terms needed to stop
  std::size_t max_terms = 1'000'000; // hard cap on evaluated terms
  std::size_t divergence_check = 10'000;
};

enum class SeriesStatus { converged, diverged, exhausted };

struct SeriesResult {
  double log_sum = kNegInf;
  std::size_t terms = 0;
  SeriesStatus status = SeriesStatus::converged;
};

/// Sums exp(term(n)) for n = 0, 1, ... in log domain.
///
/// Stops once `tail_run` consecutive terms sit below the running log-sum by
/// more than `tail_log_gap`. Past `divergence_check` indices the terms must be
/// strictly decreasing over a full `tail_run` stretch, otherwise the sum is
/// declared divergent (+inf). When `last_index` is given the sum is finite and
/// exact up to that index.
inline SeriesResult sum_log_series(const std::function<double(std::size_t)>& term,
                                   const SeriesOptions& opt = {},
                                   std::optional<std::size_t> last_index = std::nullopt) {
  LogSumExp acc;
  SeriesResult res;
  std::size_t small_run = 0;
  std::size_t decreasing_run = 0;
  double prev = kInf;
  const std::size_t cap = last_index ? std::min(*last_index + 1, opt.max_terms) : opt.max_terms;

  for (std::size_t n = 0; n < cap; ++n) {
    const double t = term(n);
    acc.add(t);
    res.terms = n + 1;
    const double s = acc.value();
    if (s == kInf) {
      res.log_sum = kInf;
      res.status = SeriesStatus::diverged;
      return res;
    }
    if (last_index) continue;

    small_run = (s != kNegInf && t < s - opt.tail_log_gap) ? small_run + 1 : 0;
    if (small_run >= opt.tail_run) {
      res.log_sum = s;
      res.status = SeriesStatus::converged;
      return res;
    }

    if (n >= opt.divergence_check) {
      decreasing_run = (t < prev || t == kNegInf) ? decreasing_run + 1 : 0;
      if (n >= opt.divergence_check + opt.tail_run && decreasing_run < opt.tail_run) {
        res.log_sum = kInf;
        res.status = SeriesStatus::diverged;
        return res;
      }
    }
    prev = t;
  }

  res.log_sum = acc.value();
  if (!last_index || *last_index + 1 > opt.max_terms) res.status = SeriesStatus::exhausted;
  return res;
}

}  // namespace entire_growth
