#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace qhp {

// All numeric invariants are exact: arbitrary-precision integers and
// rationals throughout, never floating point. Discriminant signs and
// e-invariant sums are decided by exact comparisons.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int den(const Rat& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rat& q) { return den(q) == 1; }

/// Smallest integer >= p/q for q > 0.
inline Int ceil_div(const Int& p, const Int& q) {
  Int d = p / q;
  if (p % q != 0 && ((p > 0) == (q > 0))) ++d;
  return d;
}

inline Int ceil_rat(const Rat& x) { return ceil_div(num(x), den(x)); }

/// Exact integer square root; empty if n is not a perfect square.
inline std::optional<Int> perfect_sqrt(const Int& n) {
  if (n < 0) return std::nullopt;
  Int r = boost::multiprecision::sqrt(n);
  if (r * r == n) return r;
  return std::nullopt;
}

/// Parses "p/q" or "p" into an exact rational.
Rat parse_rational(const std::string& text);

/// Serializes as "p/q" ("p" when the denominator is 1).
std::string rational_to_string(const Rat& q);

class domain_error : public std::runtime_error {
 public:
  domain_error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace qhp
