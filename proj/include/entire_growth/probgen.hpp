#pragma once

// Integer-valued random variables through their generating functions
// g(z) = E z^xi = sum_k P(xi = k) z^k.

#include "entire_growth/bounds.hpp"
#include "entire_growth/entire.hpp"
#include "entire_growth/error.hpp"
#include "entire_growth/logsum.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace entire_growth::probgen {

enum class Family { poisson, geometric, degenerate, table };

class DiscreteDistribution {
 public:
  static DiscreteDistribution poisson(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::input, "poisson needs lambda > 0");
    DiscreteDistribution d(Family::poisson, "poisson", entire::CoefficientSequence::from_rule(
        "poisson", [lambda](std::size_t k) -> entire::LogCoeff {
          const double x = static_cast<double>(k);
          return -lambda + x * std::log(lambda) - std::lgamma(x + 1.0);
        }));
    d.lambda_ = lambda;
    return d;
  }

  /// P(xi = k) = p (1-p)^k; the generating function has radius 1/(1-p).
  static DiscreteDistribution geometric(double p) {
    if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorKind::input, "geometric needs p in (0, 1]");
    const double lq = std::log1p(-p);
    DiscreteDistribution d(Family::geometric, "geometric", entire::CoefficientSequence::from_rule(
        "geometric", [p, lq](std::size_t k) -> entire::LogCoeff {
          if (p == 1.0) return k == 0 ? entire::LogCoeff{0.0} : entire::LogCoeff{};
          return std::log(p) + static_cast<double>(k) * lq;
        }));
    d.radius_ = p == 1.0 ? kInf : 1.0 / (1.0 - p);
    return d;
  }

  /// xi = k0 almost surely.
  static DiscreteDistribution degenerate(std::size_t k0) {
    std::vector<entire::LogCoeff> t(k0 + 1);
    t[k0] = 0.0;
    return DiscreteDistribution(Family::degenerate, "degenerate",
                                entire::CoefficientSequence::from_table("degenerate", std::move(t)));
  }

  /// Finite table of ln P(xi = k); masses must sum to 1 within `tol`.
  static DiscreteDistribution table(std::vector<entire::LogCoeff> log_mass, double tol = 1e-12) {
    LogSumExp acc;
    for (const auto& m : log_mass) {
      if (m && *m > 0.0) throw Error(ErrorKind::input, "probability mass above 1");
      if (m) acc.add(*m);
    }
    const double total = std::exp(acc.value());
    if (!(std::abs(total - 1.0) <= tol))
      throw Error(ErrorKind::input, "masses sum to " + std::to_string(total) + ", not 1");
    return DiscreteDistribution(Family::table, "table",
                                entire::CoefficientSequence::from_table("table", std::move(log_mass)));
  }

  Family family() const { return family_; }
  const std::string& name() const { return name_; }
  const entire::CoefficientSequence& masses() const { return masses_; }
  entire::LogCoeff log_mass(std::size_t k) const { return masses_.log_abs(k); }
  double radius() const { return radius_; }
  bool is_entire() const { return radius_ == kInf; }
  /// Finite support, i.e. a polynomial generating function.
  bool is_polynomial() const { return family_ == Family::degenerate || family_ == Family::table; }
  double poisson_lambda() const { return lambda_; }

 private:
  DiscreteDistribution(Family f, std::string name, entire::CoefficientSequence masses)
      : family_(f), name_(std::move(name)), masses_(std::move(masses)) {}

  Family family_;
  std::string name_;
  entire::CoefficientSequence masses_;
  double radius_ = kInf;
  double lambda_ = 0.0;
};

/// ln g(r) = ln E r^xi. Coefficients are non-negative, so this is ln M_g(r).
inline double generating_function_log(const DiscreteDistribution& dist, double r, const SeriesOptions& opt = {}) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorKind::input, "r must be positive and finite");
  if (!(r < dist.radius()))
    throw Error(ErrorKind::divergence, "r=" + std::to_string(r) + " is outside the radius of convergence " +
                                           std::to_string(dist.radius()) + " of the '" + dist.name() +
                                           "' generating function");
  return entire::log_max_function(dist.masses(), r, opt).value;
}

/// Growth profile Lambda_P(v) = ln g(e^v) with the closed form where known.
inline bounds::GrowthFunction growth_profile(const DiscreteDistribution& dist) {
  if (dist.family() == Family::poisson) return bounds::shifted_exp(dist.poisson_lambda());
  throw Error(ErrorKind::unsupported, "no closed-form growth profile for '" + dist.name() + "'");
}

inline bounds::TauberianReport prob_tauberian_report(const DiscreteDistribution& dist,
                                                     const bounds::GrowthFunction& lambda_p,
                                                     std::span<const double> r_grid, std::span<const double> n_grid,
                                                     const bounds::TauberianOptions& opt = {}) {
  if (!dist.is_entire())
    throw Error(ErrorKind::precondition, "generating function of '" + dist.name() + "' is not entire");
  if (dist.is_polynomial())
    throw Error(ErrorKind::precondition, "'" + dist.name() + "' has finite support (polynomial generating function)");
  return bounds::tauberian_report(dist.masses(), lambda_p, r_grid, n_grid, opt);
}

}  // namespace entire_growth::probgen
