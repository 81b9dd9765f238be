#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "nines/numerics/bigfloat.hpp"

namespace nines {

// B_2, B_4, ..., B_{2n} as exact rationals, from the tangent numbers T_k
// (Brent-Harvey integer recurrence) and
//   B_{2k} = (-1)^(k-1) 2k T_k / (4^k (4^k - 1)).
// Grown on demand and cached for the process lifetime.
inline Rational bernoulli_b2n(int k) {
  if (k < 1) throw DomainError("bernoulli_b2n expects k >= 1");
  static std::mutex m;
  static std::vector<Rational> cache;  // cache[k-1] = B_{2k}
  std::lock_guard lock(m);
  if (static_cast<int>(cache.size()) < k) {
    const int n = std::max(k, 2 * static_cast<int>(cache.size()) + 8);
    std::vector<Integer> t(n + 1);
    t[1] = 1;
    for (int i = 2; i <= n; ++i) t[i] = (i - 1) * t[i - 1];
    for (int i = 2; i <= n; ++i)
      for (int j = i; j <= n; ++j) t[j] = (j - i) * t[j - 1] + (j - i + 2) * t[j];
    cache.clear();
    for (int i = 1; i <= n; ++i) {
      Integer four = Integer(1) << (2 * i);
      Rational b(Integer(2 * i) * t[i], four * (four - 1));
      if (i % 2 == 0) b = -b;
      cache.push_back(b);
    }
  }
  return cache[k - 1];
}

struct ZetaValue {
  BigFloat value;
  std::string method;
  int terms = 0;        // direct-summation cutoff N
  int corrections = 0;  // Euler-Maclaurin corrections used, or 0
  BigFloat first_omitted = 0;
};

// zeta(s) = sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2
//           + sum_{m=1}^{M} B_2m/(2m)! s(s+1)...(s+2m-2) N^(1-s-2m).
// N = digits + 10; corrections are added until the next one is below
// 10^-(digits+2), and that first omitted correction is reported.
inline ZetaValue zeta_euler_maclaurin(int s, int digits) {
  if (s < 2) throw DomainError("zeta(s) needs s >= 2, got " + std::to_string(s));
  if (digits < 1 || digits > 1000) throw DomainError("zeta digits must be in 1..1000");
  PrecisionScope scope(digits + kGuardDigits);
  const int n_cut = digits + 10;
  const BigFloat threshold = pow10(-(digits + 2));
  ZetaValue out;
  out.method = "euler-maclaurin";
  out.terms = n_cut;
  BigFloat sum = 0;
  for (int n = n_cut - 1; n >= 1; --n) sum += boost::multiprecision::pow(BigFloat(n), -s);
  const BigFloat big_n(n_cut);
  const BigFloat n_pow = boost::multiprecision::pow(big_n, -s);
  sum += big_n * n_pow / (s - 1) + n_pow / 2;
  // rising = s(s+1)...(s+2m-2) / (2m)!, power = N^(1-s-2m)
  BigFloat rising = BigFloat(s) / 2;
  BigFloat power = n_pow / big_n;
  const BigFloat inv_n2 = 1 / (big_n * big_n);
  for (int m = 1;; ++m) {
    const BigFloat term = to_bigfloat(bernoulli_b2n(m)) * rising * power;
    if (abs(term) < threshold) {
      out.first_omitted = abs(term);
      break;
    }
    if (m > 4 * n_cut) throw ArithmeticError("Euler-Maclaurin corrections failed to converge");
    sum += term;
    out.corrections = m;
    rising *= BigFloat(s + 2 * m - 1) * (s + 2 * m) / ((2 * m + 1) * (2 * m + 2));
    power *= inv_n2;
  }
  out.value = sum;
  return out;
}

// Independent second method: the accelerated alternating series for
// eta(s) = (1 - 2^(1-s)) zeta(s) with
//   d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!),
//   eta(s) ~ -1/d_n sum_{k<n} (-1)^k (d_k - d_n) / (k+1)^s,
// error below 3 (3 + sqrt 8)^-n, so n = (digits + 5) / log10(3 + sqrt 8).
inline ZetaValue zeta_alternating(int s, int digits) {
  if (s < 2) throw DomainError("zeta(s) needs s >= 2, got " + std::to_string(s));
  if (digits < 1 || digits > 1000) throw DomainError("zeta digits must be in 1..1000");
  PrecisionScope scope(digits + kGuardDigits);
  const int n = static_cast<int>(std::ceil((digits + 5) / std::log10(3.0 + std::sqrt(8.0)))) + 1;
  std::vector<Rational> d(n + 1);
  // term_i = n (n+i-1)! 4^i / ((n-i)! (2i)!), updated by its ratio in i.
  Rational term = Rational(1);  // i = 0: n (n-1)! / n! = 1
  Rational acc = term;
  d[0] = acc;
  for (int i = 1; i <= n; ++i) {
    term *= Rational(Integer(n + i - 1) * (n - i + 1) * 4, Integer(2 * i - 1) * (2 * i));
    acc += term;
    d[i] = acc;
  }
  BigFloat sum = 0;
  for (int k = 0; k < n; ++k) {
    const BigFloat t = to_bigfloat(d[k] - d[n]) / boost::multiprecision::pow(BigFloat(k + 1), s);
    sum += (k % 2 == 0) ? t : BigFloat(-t);
  }
  const BigFloat eta = -sum / to_bigfloat(d[n]);
  ZetaValue out;
  out.method = "alternating-series";
  out.terms = n;
  out.first_omitted = 3 / boost::multiprecision::pow(BigFloat(3) + boost::multiprecision::sqrt(BigFloat(8)), n);
  out.value = eta / (1 - boost::multiprecision::pow(BigFloat(2), 1 - s));
  return out;
}

// zeta(s) with absolute error below 10^-digits (Euler-Maclaurin), memoized.
inline BigFloat zeta_single(int s, int digits) {
  static std::mutex m;
  static std::map<std::pair<int, int>, BigFloat> cache;
  {
    std::lock_guard lock(m);
    auto it = cache.find({s, digits});
    if (it != cache.end()) return it->second;
  }
  BigFloat v = zeta_euler_maclaurin(s, digits).value;
  std::lock_guard lock(m);
  cache.emplace(std::pair{s, digits}, v);
  return v;
}

}  // namespace nines
