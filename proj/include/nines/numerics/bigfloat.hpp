#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <mutex>
#include <sstream>
#include <string>

#include "nines/error.hpp"
#include "nines/rational.hpp"

namespace nines {

using BigFloat = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                               boost::multiprecision::et_off>;

namespace detail {
inline std::recursive_mutex& precision_mutex() {
  static std::recursive_mutex m;
  return m;
}
}  // namespace detail

// Boost keeps the default MPFR precision in a process-wide static. Every
// numeric entry point holds one of these for the duration of the call, so
// concurrent callers are serialized rather than racing on the precision.
class PrecisionScope {
public:
  explicit PrecisionScope(int digits10) : lock_(detail::precision_mutex()), saved_(BigFloat::default_precision()) {
    if (digits10 < 15) throw DomainError("working precision must be at least 15 digits");
    BigFloat::default_precision(static_cast<unsigned>(digits10));
  }
  ~PrecisionScope() { BigFloat::default_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
  std::unique_lock<std::recursive_mutex> lock_;
  unsigned saved_;
};

// Guard digits carried on top of what the caller asked for.
inline constexpr int kGuardDigits = 10;

inline BigFloat to_bigfloat(const Rational& q) {
  BigFloat n(numerator_of(q));
  BigFloat d(denominator_of(q));
  return n / d;
}

inline BigFloat pow10(int e) { return boost::multiprecision::pow(BigFloat(10), e); }

// Fixed-point decimal with `digits` digits after the point, rounded.
inline std::string to_decimal(const BigFloat& x, int digits) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << x;
  std::string s = os.str();
  if (s == "-0" || s.rfind("-0.", 0) == 0) {
    bool all_zero = true;
    for (char c : s.substr(1))
      if (c != '0' && c != '.') all_zero = false;
    if (all_zero) s.erase(0, 1);
  }
  return s;
}

// Fixed-point decimal cut (not rounded) after `digits` digits, as in a
// printed "0.999222...". Exact unless the cut falls inside a run of ten 9s.
inline std::string to_decimal_truncated(const BigFloat& x, int digits) {
  std::string s = to_decimal(x, digits + 10);
  s.resize(s.size() - 10);
  if (digits == 0) s.pop_back();
  return s;
}

// Scientific notation with `digits` significant digits; used for error terms.
inline std::string to_scientific(const BigFloat& x, int digits = 3) {
  std::ostringstream os;
  os.setf(std::ios::scientific);
  os.precision(digits - 1);
  os << x;
  return os.str();
}

struct Interval {
  BigFloat lower;
  BigFloat upper;

  Interval(BigFloat lo, BigFloat hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower > upper) throw DomainError("interval lower bound exceeds upper bound");
  }
  bool contains(const BigFloat& x) const { return lower <= x && x <= upper; }
  BigFloat width() const { return upper - lower; }
};

}  // namespace nines
