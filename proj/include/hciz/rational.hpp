#pragma once

// Exact rational arithmetic. GMP's mpq_class keeps values in lowest terms
// with a positive denominator after every arithmetic operation; the helpers
// here canonicalize on construction and fix the textual form `num/den`.

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace hciz {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational make_rational(long num, long den = 1) {
  return make_rational(Integer(num), Integer(den));
}

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

inline Rational inv(const Rational& r) {
  if (is_zero(r)) throw std::domain_error("division by zero rational");
  return Rational(1) / r;
}

/// Always `num/den`, also for integers (`3/1`, `0/1`).
inline std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Accepts `p`, `-p`, `p/q`. Whitespace is not allowed.
inline Rational parse_rational(std::string_view text) {
  auto valid_int = [](std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  auto to_int = [](std::string_view s) {
    if (s[0] == '+') s.remove_prefix(1);
    return Integer(std::string(s));
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!valid_int(text))
      throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
    return Rational(to_int(text));
  }
  auto num = text.substr(0, slash);
  auto den = text.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
    throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
  return make_rational(to_int(num), to_int(den));
}

inline Integer factorial(unsigned long n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

inline Integer binomial(unsigned long n, unsigned long k) {
  Integer b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

}  // namespace hciz
