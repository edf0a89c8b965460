#pragma once

#include <stdexcept>
#include <string>

namespace entire_growth {

enum class ErrorKind {
  input,             // malformed or out-of-range arguments
  domain_degenerate, // fewer than two finite samples
  extrapolation,     // query outside the sampled window
  unsupported,       // dimension or family not handled
  resource,          // memory estimate exceeded
  truncation,        // series did not converge within max_terms
  undefined_order,   // no nonzero coefficient in the scan window
  no_finite_bound,   // Y(eps) infinite on the whole eps grid
  invalid_growth,    // growth function not positive where required
  precondition,      // caller-side hypothesis violated
  divergence,        // series radius exceeded
  parse,             // config or table parse failure
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::input: return "input";
    case ErrorKind::domain_degenerate: return "domain-degenerate";
    case ErrorKind::extrapolation: return "extrapolation";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::resource: return "resource";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::undefined_order: return "undefined-order";
    case ErrorKind::no_finite_bound: return "no-finite-bound";
    case ErrorKind::invalid_growth: return "invalid-growth";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

/// Every failure raised by the library. `kind()` is stable; the message is
/// free text meant for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace entire_growth
