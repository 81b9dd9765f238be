#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

#include "nines/error.hpp"

namespace nines {

// Arbitrary-precision rational, always in lowest terms with positive
// denominator (GMP mpq semantics).
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;

inline Rational rat_add(const Rational& x, const Rational& y) { return x + y; }
inline Rational rat_sub(const Rational& x, const Rational& y) { return x - y; }
inline Rational rat_mul(const Rational& x, const Rational& y) { return x * y; }

inline Rational rat_div(const Rational& x, const Rational& y) {
  if (y == 0) throw ArithmeticError("rational division by zero");
  return x / y;
}

inline Integer numerator_of(const Rational& x) { return boost::multiprecision::numerator(x); }
inline Integer denominator_of(const Rational& x) { return boost::multiprecision::denominator(x); }

inline Rational rat_pow(const Rational& x, unsigned n) {
  Rational r = 1, base = x;
  while (n) {
    if (n & 1u) r *= base;
    n >>= 1u;
    if (n) base *= base;
  }
  return r;
}

inline bool is_integer(const Rational& x) { return denominator_of(x) == 1; }

// "-11/2", "3", "0"
inline std::string to_string(const Rational& x) { return x.str(); }

// Accepts an optional sign, digits, and an optional "/digits" part.
inline Rational parse_rational(std::string_view text) {
  std::size_t pos = 0;
  const std::string s(text);
  auto fail = [&](const char* what) { throw ParseError(what, s, pos); };
  if (s.empty()) fail("empty rational");
  const bool negative = s[pos] == '-';
  if (s[pos] == '+' || s[pos] == '-') ++pos;
  const std::size_t num_begin = pos;
  while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
  if (pos == num_begin) fail("expected digits");
  if (pos < s.size()) {
    if (s[pos] != '/') fail("unexpected character in rational");
    ++pos;
    const std::size_t den_begin = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == den_begin) fail("expected denominator digits");
    if (pos != s.size()) fail("trailing characters after rational");
    const Integer den(s.substr(den_begin));
    if (den == 0) throw ArithmeticError("zero denominator in rational literal '" + s + "'");
    Integer num(s.substr(num_begin, den_begin - 1 - num_begin));
    if (negative) num = -num;
    return Rational(num, den);
  }
  Integer num(s.substr(num_begin));
  if (negative) num = -num;
  return Rational(num);
}

}  // namespace nines
