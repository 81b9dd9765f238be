#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "nines/numerics/bigfloat.hpp"
#include "nines/numerics/zeta.hpp"

namespace nines {

// Truncated sums up to this size are accumulated exactly in Q.
inline constexpr int kExactSumLimit = 200;
inline constexpr long long kMaxTruncatedTerms = 100'000'000;

struct TruncationReport {
  int a = 0;
  int b = 0;
  int digits = 30;
  BigFloat value = 0;
  BigFloat error_estimate = 0;
  std::string method;
  std::string mode;  // "exact" or "float"
  std::optional<Rational> exact;
};

namespace detail {

template <class T>
T inv(long long n) {
  return T(1) / T(n);
}

// S(a,b) summed in Q: ascending k, ascending j.
inline Rational s_truncated_exact(int a, int b) {
  std::vector<Rational> h(a + 1);
  for (int j = 1; j <= a; ++j) h[j] = h[j - 1] + Rational(1, j);
  Rational total = 0;
  Rational hk1 = 1;  // H_{k+1}
  for (int k = 1; k <= b; ++k) {
    hk1 += Rational(1, k + 1);
    Rational inner = 0;
    for (int j = 1; j <= a; ++j) inner += h[j] / (Integer(j) * (j + k));
    total += (hk1 - 1) / (Integer(k) * (k + 1)) * inner;
  }
  return total;
}

// Same order in long double with Kahan compensation.
inline long double s_truncated_float(int a, int b) {
  std::vector<long double> h(a + 1, 0.0L);
  for (int j = 1; j <= a; ++j) h[j] = h[j - 1] + 1.0L / j;
  long double sum = 0.0L, comp = 0.0L;
  long double hk1 = 1.0L;
  for (int k = 1; k <= b; ++k) {
    hk1 += 1.0L / (k + 1);
    const long double w = (hk1 - 1.0L) / (static_cast<long double>(k) * (k + 1));
    long double inner = 0.0L, icomp = 0.0L;
    for (int j = 1; j <= a; ++j) {
      const long double y = h[j] / (static_cast<long double>(j) * (j + k)) - icomp;
      const long double t = inner + y;
      icomp = (t - inner) - y;
      inner = t;
    }
    const long double y = w * inner - comp;
    const long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

// sum_{k<=b} (H_{k+1} - 1)/(k(k+1)), the outer weights.
inline BigFloat outer_weight_sum(int b) {
  BigFloat total = 0, hk1 = 1;
  for (int k = 1; k <= b; ++k) {
    hk1 += BigFloat(1) / (k + 1);
    total += (hk1 - 1) / (BigFloat(k) * (k + 1));
  }
  return total;
}

}  // namespace detail

// Majorant for S - S(a,b), all terms positive:
//   j > a, k <= b:  W_b (ln a + 2)/a,  from sum_{j>a} H_j/j^2 <= int_a^inf (1 + ln x)/x^2,
//   k > b, all j:   int_b^inf (ln x + 2)^3 x^-3 dx = b^-2 (v^3/2 + 3v^2/4 + 3v/4 + 3/8), v = ln b + 2,
// using H_k <= 1 + ln k, H_k^(2) <= 2 and sum_{j<=k} H_j/j = (H_k^2 + H_k^(2))/2.
inline BigFloat s_tail_majorant(int a, int b) {
  const BigFloat la = log(BigFloat(a));
  const BigFloat v = log(BigFloat(b)) + 2;
  const BigFloat j_tail = detail::outer_weight_sum(b) * (la + 2) / a;
  const BigFloat k_tail = (v * v * v / 2 + 3 * v * v / 4 + 3 * v / 4 + BigFloat(3) / 8) / (BigFloat(b) * b);
  return j_tail + k_tail;
}

// S(a,b) = sum_{k<=b} (H_{k+1}-1)/(k(k+1)) sum_{j<=a} H_j/(j(j+k)).
// error_estimate bounds the distance to the a,b -> infinity limit (tail
// majorant) plus, in float mode, accumulated rounding.
inline TruncationReport eval_S_truncated(int a, int b, int digits = 30) {
  if (a < 1 || b < 1) throw DomainError("eval_S_truncated needs a, b >= 1");
  if (static_cast<long long>(a) * b > kMaxTruncatedTerms)
    throw DomainError("eval_S_truncated: a*b exceeds the 10^8 term cap");
  PrecisionScope scope(std::max(digits, 15) + kGuardDigits);
  TruncationReport r;
  r.a = a;
  r.b = b;
  r.digits = digits;
  r.method = "direct double sum, ascending k then j; error = tail majorant";
  const BigFloat tail = s_tail_majorant(a, b);
  if (a <= kExactSumLimit && b <= kExactSumLimit) {
    r.mode = "exact";
    r.exact = detail::s_truncated_exact(a, b);
    r.value = to_bigfloat(*r.exact);
    r.error_estimate = tail;
  } else {
    r.mode = "float";
    r.method += " + rounding bound";
    r.value = BigFloat(detail::s_truncated_float(a, b));
    const BigFloat eps = std::numeric_limits<long double>::epsilon();
    r.error_estimate = tail + 8 * eps * (std::max(a, b) + 10) * abs(r.value);
  }
  return r;
}

namespace detail {

// sum_{k<=b} (H_{k+1}-1)/(k(k+1)) (k H_k^2 - 2 H_k + k H_k^(2) + 2k H_a^(2)) / (2k^2)
template <class T>
T s_prime_sum(int a, int b) {
  T h2a = 0;
  for (int i = 1; i <= a; ++i) h2a += inv<T>(static_cast<long long>(i) * i);
  T total = 0, h = 0, h2 = 0;
  for (int k = 1; k <= b; ++k) {
    h += inv<T>(k);
    h2 += inv<T>(static_cast<long long>(k) * k);
    const T hk1 = h + inv<T>(k + 1);
    const T w = (hk1 - 1) * inv<T>(static_cast<long long>(k) * (k + 1));
    const T tk(k);
    const T inner = (tk * h * h - 2 * h + tk * h2 + 2 * tk * h2a) * inv<T>(2LL * k * k);
    total += w * inner;
  }
  return total;
}

}  // namespace detail

// S'(a,b). error_estimate is a geometric-tail extrapolation (heuristic):
// with v1 = S'(a/4,b/4), v2 = S'(a/2,b/2), v3 = S'(a,b), d1 = v2 - v1,
// d2 = v3 - v2 and rho = d2/d1, the remaining change is |d2| rho/(1 - rho)
// when 0 < rho < 1, and |d2| otherwise.
inline TruncationReport eval_S_prime(int a, int b, int digits = 30) {
  if (a < 1 || b < 1) throw DomainError("eval_S_prime needs a, b >= 1");
  PrecisionScope scope(std::max(digits, 15) + kGuardDigits);
  TruncationReport r;
  r.a = a;
  r.b = b;
  r.digits = digits;
  r.method = "single sum over k with H_a^(2) precomputed; error = geometric-tail extrapolation (heuristic)";
  if (a <= kExactSumLimit && b <= kExactSumLimit) {
    r.mode = "exact";
    r.exact = detail::s_prime_sum<Rational>(a, b);
    r.value = to_bigfloat(*r.exact);
  } else {
    r.mode = "float";
    r.value = detail::s_prime_sum<BigFloat>(a, b);
  }
  if (a >= 4 && b >= 4) {
    const BigFloat v1 = detail::s_prime_sum<BigFloat>(a / 4, b / 4);
    const BigFloat v2 = detail::s_prime_sum<BigFloat>(a / 2, b / 2);
    const BigFloat d1 = v2 - v1, d2 = r.value - v2;
    const BigFloat rho = d1 == 0 ? BigFloat(0) : BigFloat(d2 / d1);
    r.error_estimate = (rho > 0 && rho < 1) ? BigFloat(abs(d2) * rho / (1 - rho)) : BigFloat(abs(d2));
  } else {
    r.error_estimate = abs(r.value);
  }
  return r;
}

template <class T>
struct ABC {
  T A, B, C;
  T sum() const { return A + B + C; }
};

// A(a,b), B(a,b), C(a,b) as displayed (harmonic arrays precomputed).
template <class T>
ABC<T> eval_ABC_as(int a, int b) {
  if (a < 1 || b < 1) throw DomainError("eval_ABC needs a, b >= 1");
  T h2a = 0;
  for (int i = 1; i <= a; ++i) h2a += detail::inv<T>(static_cast<long long>(i) * i);
  T h = 0, h2 = 0, c1 = 0, c2 = 0, c3 = 0, c4 = 0;
  for (int i = 1; i <= b; ++i) {
    h += detail::inv<T>(i);
    h2 += detail::inv<T>(static_cast<long long>(i) * i);
    const T i2 = detail::inv<T>(static_cast<long long>(i) * i);
    c1 += h * i2;
    c2 += h * h * i2 * detail::inv<T>(i);
    c3 += h * h * h * i2;
    c4 += h * h2 * i2;
  }
  const T tb(b);
  const T h_sq = h * h, h_cu = h * h * h;
  const T a_inner = 6 * h + 4 * tb * h + 4 * h_sq + 3 * tb * h_sq + h_cu + tb * h_cu - 6 * tb * h2a + 2 * h * h2a +
                    2 * tb * h * h2a - 2 * h2 - 7 * tb * h2 + h * h2 + tb * h * h2;
  ABC<T> r;
  r.A = a_inner * detail::inv<T>(2LL * (b + 1) * (b + 1));
  r.B = -2 * tb * tb * detail::inv<T>(static_cast<long long>(b + 1) * (b + 1)) * (h2a + h2);
  r.C = (h2a - 1) * c1 - c2 + c3 / 2 + c4 / 2;
  return r;
}

inline ABC<BigFloat> eval_ABC(int a, int b, int digits = 30) {
  PrecisionScope scope(std::max(digits, 15) + kGuardDigits);
  return eval_ABC_as<BigFloat>(a, b);
}

struct LimitTermsRow {
  int a = 0;
  BigFloat inv_k2_tail;    // (1/k^2) sum_{i<=k} 1/(a+i)
  BigFloat harmonic_tail;  // (H_a/k) sum_{i<=k} 1/(a+i)
  BigFloat nested_tail;    // (1/k) sum_{i<=k} (1/i) sum_{j<=i} 1/(a+j)
};

// The three terms dropped from the closed form of the inner sum, evaluated
// along an increasing schedule of a.
inline std::vector<LimitTermsRow> limit_terms_report(const std::vector<int>& a_schedule, int k, int digits = 30) {
  if (k < 1) throw DomainError("limit_terms_report needs k >= 1");
  for (std::size_t t = 0; t < a_schedule.size(); ++t) {
    if (a_schedule[t] < 1) throw DomainError("limit_terms_report needs a >= 1");
    if (t && a_schedule[t] <= a_schedule[t - 1]) throw DomainError("limit_terms_report schedule must be increasing");
  }
  PrecisionScope scope(std::max(digits, 15) + kGuardDigits);
  std::vector<LimitTermsRow> rows;
  BigFloat h = 0;
  int done = 0;
  for (int a : a_schedule) {
    for (; done < a; ++done) h += BigFloat(1) / (done + 1);
    BigFloat inner = 0, nested = 0;
    for (int i = 1; i <= k; ++i) {
      inner += BigFloat(1) / (a + i);
      nested += inner / i;
    }
    LimitTermsRow row;
    row.a = a;
    row.inv_k2_tail = inner / (BigFloat(k) * k);
    row.harmonic_tail = h * inner / k;
    row.nested_tail = nested / k;
    rows.push_back(row);
  }
  return rows;
}

// -4 zeta(2) - 2 zeta(3) + 4 zeta(2) zeta(3) + 2 zeta(5)
inline BigFloat rhs_theorem1(int digits) {
  if (digits < 1 || digits > 500) throw DomainError("rhs_theorem1 digits must be in 1..500");
  PrecisionScope scope(std::max(digits, 15) + kGuardDigits);
  const int d = digits + 5;
  const BigFloat z2 = zeta_single(2, d), z3 = zeta_single(3, d), z5 = zeta_single(5, d);
  return -4 * z2 - 2 * z3 + 4 * z2 * z3 + 2 * z5;
}

// Lower bound: the partial sum (terms are positive), less any float rounding.
// Upper bound: lower plus the tail majorant above.
inline Interval bracket_S(int a, int b, int digits = 30) {
  if (a < 10 || b < 10) throw DomainError("bracket_S needs a, b >= 10");
  const TruncationReport r = eval_S_truncated(a, b, digits);
  PrecisionScope scope(std::max(digits, 15) + kGuardDigits);
  const BigFloat tail = s_tail_majorant(a, b);
  const BigFloat rounding = r.error_estimate - tail;
  return Interval(r.value - rounding, r.value + rounding + tail);
}

}  // namespace nines
