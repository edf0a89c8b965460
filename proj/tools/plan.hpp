#pragma once

// Turns a parsed config document into validated per-section analysis plans.
// Every problem found here is reported as a parse error with a position.

#include "entire_growth/bounds.hpp"
#include "entire_growth/config.hpp"
#include "entire_growth/entire.hpp"
#include "entire_growth/io.hpp"
#include "entire_growth/probgen.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace eg_cli {

using namespace entire_growth;
using config::parse_error;
using config::Position;

struct Family {
  std::string kind;
  std::string label;  // as written, for the summary
  std::map<std::string, double> params;
  std::optional<entire::CoefficientSequence> coeffs;
  std::optional<bounds::GrowthFunction> growth;  // Lambda
  std::optional<bounds::GrowthFunction> decay;   // D = Lambda*, coefficient decay exponent
  std::optional<double> rho;                     // order, when known
  std::optional<double> type_c;                  // type in the c_n <= (e C rho / n)^{n/rho} sense
  std::optional<probgen::DiscreteDistribution> dist;
  std::vector<Family> factors;
};

struct Plan {
  std::string name;
  Family family;
  std::vector<std::string> analyses;
  std::vector<double> r_grid, n_grid, v_grid;
  std::size_t order_lo = 100, order_hi = 1000;
  double eps0 = 0.5;
  double c7 = 1.0;
  bounds::BoundOptions bound;
};

struct Overrides {
  std::optional<std::size_t> max_terms;
  std::optional<std::size_t> eps_points;
};

namespace detail {

inline const std::set<std::string> kKeys = {"family", "analyses", "growth", "rho",        "r_grid", "n_grid", "v_grid",
                                            "eps_grid", "eps_points", "eps0", "c7", "order_window", "max_terms"};

inline double num_arg(const config::Value& call, std::size_t index, const char* key,
                      std::optional<double> fallback = std::nullopt) {
  const config::Value* found = nullptr;
  for (const auto& a : call.args)
    if (a.key == key) found = &a.value;
  if (!found && index < call.args.size() && call.args[index].key.empty()) found = &call.args[index].value;
  if (!found) {
    if (fallback) return *fallback;
    throw parse_error(call.pos, call.text + " needs parameter '" + key + "'");
  }
  if (!found->is_number()) throw parse_error(found->pos, std::string("parameter '") + key + "' must be a number");
  return found->number;
}

inline void check_arg_keys(const config::Value& call, std::initializer_list<const char*> keys) {
  if (call.args.size() > keys.size()) throw parse_error(call.pos, call.text + " takes at most " +
                                                                       std::to_string(keys.size()) + " parameters");
  for (const auto& a : call.args) {
    if (a.key.empty()) continue;
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return a.key == k; }))
      throw parse_error(a.value.pos, "unknown parameter '" + a.key + "' for " + call.text);
  }
}

inline std::string path_arg(const config::Value& call, const std::filesystem::path& base) {
  if (call.args.size() != 1) throw parse_error(call.pos, call.text + " takes one path");
  const auto& v = call.args[0].value;
  if (v.kind != config::Value::Kind::word && v.kind != config::Value::Kind::string)
    throw parse_error(v.pos, "expected a path");
  std::filesystem::path p(v.text);
  if (p.is_relative()) p = base / p;
  if (!std::filesystem::exists(p)) throw parse_error(v.pos, "file '" + p.string() + "' not found");
  return p.string();
}

/// (x/rho) ln(x/(C rho)) - x/rho, the conjugate of C e^{rho v}.
inline bounds::GrowthFunction power_order_decay(double rho, double c) {
  return {"power_order_decay",
          [rho, c](double x) { return x > 0.0 ? (x / rho) * std::log(x / (c * rho)) - x / rho : 0.0; },
          {0.0, kInf}};
}

/// (m-1) C (x/(C m))^{m/(m-1)}, the conjugate of C max(v, 0)^m on x >= 0.
inline bounds::GrowthFunction power_log_decay(double c, double m) {
  return {"power_log_decay",
          [c, m](double x) { return x > 0.0 ? (m - 1.0) * c * std::pow(x / (c * m), m / (m - 1.0)) : 0.0; },
          {0.0, kInf}};
}

inline bounds::GrowthFunction growth_from(const config::Value& v) {
  if (v.kind != config::Value::Kind::call) throw parse_error(v.pos, "growth must be a call such as power_of_exp(C, rho)");
  try {
    if (v.text == "power_of_exp") {
      check_arg_keys(v, {"C", "rho"});
      return bounds::power_of_exp(num_arg(v, 0, "C"), num_arg(v, 1, "rho"));
    }
    if (v.text == "power_log") {
      check_arg_keys(v, {"C", "m"});
      return bounds::power_log(num_arg(v, 0, "C"), num_arg(v, 1, "m"));
    }
    if (v.text == "exp_of_exp") {
      check_arg_keys(v, {"C5", "C6"});
      return bounds::exp_of_exp(num_arg(v, 0, "C5"), num_arg(v, 1, "C6"));
    }
    if (v.text == "shifted_exp") {
      check_arg_keys(v, {"lambda"});
      return bounds::shifted_exp(num_arg(v, 0, "lambda"));
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::parse) throw;
    throw parse_error(v.pos, e.what());
  }
  throw parse_error(v.pos, "unknown growth function '" + v.text + "'");
}

inline Family family_from(const config::Value& v, const std::filesystem::path& base, bool nested) {
  Family f;
  f.kind = v.text;
  if (v.kind != config::Value::Kind::word && v.kind != config::Value::Kind::call)
    throw parse_error(v.pos, "expected a family name");
  try {
    if (v.text == "exp") {
      if (!v.args.empty()) throw parse_error(v.pos, "exp takes no parameters");
      f.coeffs = entire::exp_series();
      f.growth = bounds::power_of_exp(1.0, 1.0);
      f.decay = bounds::stirling_decay();
      f.rho = 1.0;
      f.type_c = 1.0;
    } else if (v.text == "power_order") {
      check_arg_keys(v, {"rho", "C"});
      const double rho = num_arg(v, 0, "rho"), c = num_arg(v, 1, "C");
      f.coeffs = entire::power_order(rho, c);
      f.growth = bounds::power_of_exp(c, rho);
      f.decay = power_order_decay(rho, c);
      f.rho = rho;
      f.type_c = c;
      f.params = {{"rho", rho}, {"C", c}};
    } else if (v.text == "log_power_growth") {
      check_arg_keys(v, {"m", "C"});
      const double m = num_arg(v, 0, "m"), c = num_arg(v, 1, "C");
      f.growth = bounds::power_log(c, m);
      f.decay = power_log_decay(c, m);
      const auto d = *f.decay;
      f.coeffs = entire::CoefficientSequence::from_rule(
          "log_power_growth", [d](std::size_t n) -> entire::LogCoeff { return -d(static_cast<double>(n)); });
      f.params = {{"m", m}, {"C", c}};
    } else if (v.text == "double_exp") {
      check_arg_keys(v, {"C5", "C6"});
      const double c5 = num_arg(v, 0, "C5"), c6 = num_arg(v, 1, "C6");
      f.growth = bounds::exp_of_exp(c5, c6);
      const auto g = *f.growth;
      f.coeffs = entire::CoefficientSequence::from_rule("double_exp", [g](std::size_t n) -> entire::LogCoeff {
        return bounds::coeff_upper_bound(g, static_cast<double>(n)).log_bound;
      });
      f.params = {{"C5", c5}, {"C6", c6}};
    } else if (v.text == "custom_coeff_csv") {
      f.coeffs = io::load_coefficients_csv(path_arg(v, base));
    } else if (v.text == "poisson" && !nested) {
      check_arg_keys(v, {"lambda"});
      const double lam = num_arg(v, 0, "lambda");
      f.dist = probgen::DiscreteDistribution::poisson(lam);
      f.coeffs = f.dist->masses();
      f.growth = probgen::growth_profile(*f.dist);
      f.params = {{"lambda", lam}};
    } else if (v.text == "distribution_csv" && !nested) {
      f.dist = probgen::DiscreteDistribution::table(io::load_distribution_csv(path_arg(v, base)), 1e-9);
      f.coeffs = f.dist->masses();
    } else if (v.text == "factorized" && !nested) {
      if (v.args.size() < 2 || v.args.size() > 3) throw parse_error(v.pos, "factorized takes two or three families");
      for (const auto& a : v.args) {
        if (!a.key.empty()) throw parse_error(a.value.pos, "factorized takes positional families");
        f.factors.push_back(family_from(a.value, base, true));
      }
    } else {
      throw parse_error(v.pos, "unknown family '" + v.text + "'" + (nested ? " inside factorized" : ""));
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::parse) throw;
    throw parse_error(v.pos, e.what());
  }
  return f;
}

inline std::vector<double> grid_of(const config::Section& s, const char* key, std::vector<double> fallback) {
  const auto* e = s.find(key);
  if (!e) return fallback;
  auto g = config::expand_grid(e->items);
  if (g.empty()) throw parse_error(e->value_pos, std::string(key) + " is empty");
  return g;
}

inline double scalar_of(const config::Section& s, const char* key, double fallback) {
  const auto* e = s.find(key);
  if (!e) return fallback;
  if (e->items.size() != 1 || !e->items[0].value.is_number() || !e->items[0].key.empty())
    throw parse_error(e->value_pos, std::string(key) + " must be a single number");
  return e->items[0].value.number;
}

inline std::size_t count_of(const config::Section& s, const char* key, std::size_t fallback) {
  const double x = scalar_of(s, key, static_cast<double>(fallback));
  if (!(x >= 1.0 && x <= 1e8 && x == std::floor(x)))
    throw parse_error(s.find(key)->value_pos, std::string(key) + " must be a positive integer");
  return static_cast<std::size_t>(x);
}

struct Requirement {
  bool coeffs = false, growth = false, decay = false, rho = false, dist = false, factors = false;
  const char* family = nullptr;  // exact family required
};

inline const std::map<std::string, Requirement>& analysis_table() {
  static const std::map<std::string, Requirement> t = {
      {"coeff_bound", {.coeffs = true, .growth = true}},
      {"tauberian", {.coeffs = true, .growth = true}},
      {"max_bound", {.coeffs = true, .decay = true}},
      {"order", {.coeffs = true}},
      {"type", {.coeffs = true, .rho = true}},
      {"gamma", {.growth = true}},
      {"example_31", {.family = "log_power_growth"}},
      {"example_32", {.coeffs = true, .rho = true}},
      {"example_33", {.family = "double_exp"}},
      {"generating", {.dist = true}},
      {"prob_tauberian", {.dist = true}},
      {"factorizable", {.factors = true}},
      {"multi_coeff_bound", {.factors = true}},
      {"multi_max_bound", {.factors = true}},
  };
  return t;
}

inline void check_requirement(const std::string& name, const Requirement& r, const Family& f, Position pos) {
  auto missing = [&](const char* what) {
    return parse_error(pos, "analysis '" + name + "' needs " + what + ", which family '" + f.kind + "' does not provide");
  };
  if (r.family && f.kind != r.family) throw parse_error(pos, "analysis '" + name + "' needs family " + r.family);
  if (r.coeffs && !f.coeffs) throw missing("coefficients");
  if (r.growth && !f.growth) throw missing("a growth function (set 'growth')");
  if (r.decay && !f.decay) throw missing("a closed-form coefficient decay exponent");
  if (r.rho && !f.rho) throw missing("an order (set 'rho')");
  if (r.dist && !f.dist) throw missing("a distribution");
  if (r.factors) {
    if (f.factors.empty()) throw missing("factorized components");
    for (const auto& c : f.factors)
      if (!c.coeffs) throw missing("coefficients for every factor");
    if (name != "factorizable")
      for (const auto& c : f.factors)
        if (!c.growth || (name == "multi_max_bound" && !c.decay)) throw missing("growth data for every factor");
    if (name == "factorizable" && f.factors.size() != 2) throw parse_error(pos, "factorizable needs exactly two factors");
  }
}

}  // namespace detail

inline std::vector<Plan> build_plans(const config::Document& doc, const std::filesystem::path& base,
                                     const Overrides& ov) {
  if (doc.sections.empty()) throw parse_error({1, 1}, "config has no [section]");
  std::vector<Plan> plans;
  for (const auto& s : doc.sections) {
    for (const auto& e : s.entries)
      if (!detail::kKeys.count(e.key)) throw parse_error(e.key_pos, "unknown key '" + e.key + "'");
    Plan p;
    p.name = s.name;
    const auto* fam = s.find("family");
    if (!fam) throw parse_error(s.pos, "section [" + s.name + "] has no 'family'");
    if (fam->items.size() != 1 || !fam->items[0].key.empty())
      throw parse_error(fam->value_pos, "family takes exactly one value");
    p.family = detail::family_from(fam->items[0].value, base, false);
    p.family.label = fam->raw;
    if (const auto* g = s.find("growth")) {
      if (g->items.size() != 1) throw parse_error(g->value_pos, "growth takes exactly one value");
      p.family.growth = detail::growth_from(g->items[0].value);
    }
    if (s.find("rho")) {
      const double rho = detail::scalar_of(s, "rho", 1.0);
      if (!(rho > 0.0)) throw parse_error(s.find("rho")->value_pos, "rho must be positive");
      p.family.rho = rho;
    }

    const auto* an = s.find("analyses");
    if (!an) throw parse_error(s.pos, "section [" + s.name + "] has no 'analyses'");
    for (const auto& a : an->items) {
      if (a.value.kind != config::Value::Kind::word || !a.key.empty())
        throw parse_error(a.value.pos, "analysis names are bare words");
      const auto it = detail::analysis_table().find(a.value.text);
      if (it == detail::analysis_table().end()) throw parse_error(a.value.pos, "unknown analysis '" + a.value.text + "'");
      if (std::find(p.analyses.begin(), p.analyses.end(), a.value.text) != p.analyses.end())
        throw parse_error(a.value.pos, "analysis '" + a.value.text + "' listed twice");
      detail::check_requirement(a.value.text, it->second, p.family, a.value.pos);
      p.analyses.push_back(a.value.text);
    }

    std::vector<double> r_default;
    for (int k = 2; k <= 10; k += 2) r_default.push_back(std::exp(static_cast<double>(k)));
    p.r_grid = detail::grid_of(s, "r_grid", r_default);
    p.n_grid = detail::grid_of(s, "n_grid", {1, 2, 5, 10, 20, 50, 100, 200, 500, 1000});
    p.v_grid = detail::grid_of(s, "v_grid", {0, 1, 2, 3});
    for (double r : p.r_grid)
      if (!(r > 0.0)) throw parse_error(s.find("r_grid")->value_pos, "r_grid values must be positive");
    for (double n : p.n_grid)
      if (!(n >= 0.0) || n != std::floor(n) || n > 1e7)
        throw parse_error(s.find("n_grid")->value_pos, "n_grid values must be non-negative integers");
    if (s.find("eps_grid")) {
      p.bound.eps_grid = detail::grid_of(s, "eps_grid", {});
      try {
        (void)bounds::eps_grid_for(p.bound);
      } catch (const Error& e) {
        throw parse_error(s.find("eps_grid")->value_pos, e.what());
      }
    }
    p.bound.eps_points = detail::count_of(s, "eps_points", p.bound.eps_points);
    p.bound.series.max_terms = detail::count_of(s, "max_terms", p.bound.series.max_terms);
    p.eps0 = detail::scalar_of(s, "eps0", p.eps0);
    if (!(p.eps0 > 0.0 && p.eps0 < 1.0)) throw parse_error(s.find("eps0")->value_pos, "eps0 must lie in (0, 1)");
    p.c7 = detail::scalar_of(s, "c7", p.c7);
    if (!(p.c7 > 0.0)) throw parse_error(s.find("c7")->value_pos, "c7 must be positive");
    if (const auto* w = s.find("order_window")) {
      const auto g = config::expand_grid(w->items);
      if (g.size() != 2 || !(g[0] >= 2.0) || !(g[1] > g[0]) || g[0] != std::floor(g[0]) || g[1] != std::floor(g[1]))
        throw parse_error(w->value_pos, "order_window must be two integers lo, hi with 2 <= lo < hi");
      p.order_lo = static_cast<std::size_t>(g[0]);
      p.order_hi = static_cast<std::size_t>(g[1]);
    }
    if (ov.max_terms) p.bound.series.max_terms = *ov.max_terms;
    if (ov.eps_points) {
      p.bound.eps_points = *ov.eps_points;
      p.bound.eps_grid.clear();
    }
    plans.push_back(std::move(p));
  }
  return plans;
}

}  // namespace eg_cli
