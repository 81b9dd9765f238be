#pragma once

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "nines/mzv.hpp"
#include "nines/numerics/bigfloat.hpp"
#include "nines/numerics/zeta.hpp"

namespace nines {

namespace detail {

inline BigFloat euler_gamma() {
  BigFloat g;
  mpfr_const_euler(g.backend().data(), MPFR_RNDN);
  return g;
}

// Finite sum of c * (ln x)^i * x^-j, truncated at j <= max_j.
class LogPowerSeries {
public:
  using Key = std::pair<int, int>;  // (i, j)

  explicit LogPowerSeries(int max_j) : max_j_(max_j) {}

  void add(int i, int j, const BigFloat& c) {
    if (j > max_j_ || c == 0) return;
    terms_[{i, j}] += c;
  }

  const std::map<Key, BigFloat>& terms() const noexcept { return terms_; }

  LogPowerSeries operator*(const LogPowerSeries& o) const {
    LogPowerSeries r(std::min(max_j_, o.max_j_));
    for (const auto& [k1, c1] : terms_)
      for (const auto& [k2, c2] : o.terms_) r.add(k1.first + k2.first, k1.second + k2.second, c1 * c2);
    return r;
  }

private:
  int max_j_;
  std::map<Key, BigFloat> terms_;
};

// Asymptotic expansion of H_x^(p) for large x.
//   p = 1:  ln x + gamma + 1/(2x) - sum_m B_2m / (2m) x^-2m
//   p >= 2: zeta(p) - x^(1-p)/(p-1) + x^-p/2 - sum_m B_2m/(2m)! (p)_(2m-1) x^(1-p-2m)
inline LogPowerSeries harmonic_asymptotic(int p, int max_j, int digits) {
  LogPowerSeries s(max_j);
  if (p == 1) {
    s.add(1, 0, 1);
    s.add(0, 0, euler_gamma());
    s.add(0, 1, BigFloat(1) / 2);
    for (int m = 1; 2 * m <= max_j; ++m) s.add(0, 2 * m, -to_bigfloat(bernoulli_b2n(m)) / (2 * m));
    return s;
  }
  s.add(0, 0, zeta_single(p, digits));
  s.add(0, p - 1, BigFloat(-1) / (p - 1));
  s.add(0, p, BigFloat(1) / 2);
  BigFloat rising = BigFloat(p) / 2;  // (p)_(2m-1) / (2m)!
  for (int m = 1; p + 2 * m - 1 <= max_j; ++m) {
    s.add(0, p + 2 * m - 1, -to_bigfloat(bernoulli_b2n(m)) * rising);
    rising *= BigFloat(p + 2 * m - 1) * (p + 2 * m) / ((2 * m + 1) * (2 * m + 2));
  }
  return s;
}

// sum_{n >= N} (ln n)^i n^-j for j >= 2 by Euler-Maclaurin at N, with the
// derivatives of (ln x)^i x^-j kept in closed form.
inline BigFloat log_power_tail(int i, int j, int n_cut, const BigFloat& threshold) {
  const BigFloat n(n_cut);
  const BigFloat ln_n = log(n);
  std::vector<BigFloat> ln_pow(i + 1, BigFloat(1));
  for (int t = 1; t <= i; ++t) ln_pow[t] = ln_pow[t - 1] * ln_n;

  // Integral: I(t) = N^(1-j) ln^t N / (j-1) + t/(j-1) I(t-1).
  const BigFloat n_1j = boost::multiprecision::pow(n, 1 - j);
  BigFloat integral = n_1j / (j - 1);
  for (int t = 1; t <= i; ++t) integral = n_1j * ln_pow[t] / (j - 1) + BigFloat(t) / (j - 1) * integral;

  // g as a map (log power -> coeff) times x^-(j + order).
  std::map<int, BigFloat> g{{i, BigFloat(1)}};
  int order = 0;
  auto eval_g = [&]() {
    BigFloat v = 0;
    for (const auto& [t, c] : g) v += c * ln_pow[t];
    return v * boost::multiprecision::pow(n, -(j + order));
  };
  auto differentiate = [&]() {
    std::map<int, BigFloat> d;
    const int e = j + order;
    for (const auto& [t, c] : g) {
      if (t > 0) d[t - 1] += c * t;
      d[t] -= c * e;
    }
    g = std::move(d);
    ++order;
  };

  BigFloat total = integral + eval_g() / 2;
  differentiate();  // g'
  BigFloat fact = 2;  // (2m)!
  for (int m = 1;; ++m) {
    const BigFloat term = -to_bigfloat(bernoulli_b2n(m)) / fact * eval_g();
    total += term;
    if (abs(term) < threshold) break;
    if (m > 200) throw ArithmeticError("log-power tail did not converge");
    differentiate();
    differentiate();
    fact *= BigFloat(2 * m + 1) * (2 * m + 2);
  }
  return total;
}

}  // namespace detail

inline constexpr int kEulerMaxDepth = 3;
inline constexpr int kEulerMaxWeight = 9;
inline constexpr int kEulerMaxDigits = 60;

// S_{p_1..p_k; q} = sum_n H_n^(p_1)...H_n^(p_k) / n^q, computed independently
// of the MZV machinery: direct summation for n < N = 1000, then the summand's
// asymptotic expansion in (ln n)^i n^-j is summed termwise by Euler-Maclaurin.
inline BigFloat euler_numeric(const EulerIndex& e, int digits) {
  if (static_cast<int>(e.ps().size()) > kEulerMaxDepth || e.weight() > kEulerMaxWeight)
    throw DomainError("euler_numeric supports k <= 3 and weight <= 9, got " + e.to_string());
  if (digits < 1 || digits > kEulerMaxDigits) throw DomainError("euler_numeric digits must be in 1..60");
  PrecisionScope scope(digits + kGuardDigits);
  const int n_cut = 1000;
  const int max_j = static_cast<int>(std::ceil((digits + 8) / 3.0)) + e.weight() + 4;

  // Direct part.
  std::vector<BigFloat> h(e.ps().size(), BigFloat(0));
  BigFloat direct = 0;
  for (int n = 1; n < n_cut; ++n) {
    const BigFloat bn(n);
    BigFloat term = 1;
    for (std::size_t t = 0; t < e.ps().size(); ++t) {
      h[t] += 1 / boost::multiprecision::pow(bn, e.ps()[t]);
      term *= h[t];
    }
    direct += term / boost::multiprecision::pow(bn, e.q());
  }

  // Tail from the asymptotic expansion of the summand.
  detail::LogPowerSeries f(max_j);
  f.add(0, e.q(), 1);
  for (int p : e.ps()) f = f * detail::harmonic_asymptotic(p, max_j, digits + 5);
  const BigFloat threshold = pow10(-(digits + 5));
  BigFloat tail = 0;
  for (const auto& [key, c] : f.terms()) tail += c * detail::log_power_tail(key.first, key.second, n_cut, threshold);
  return direct + tail;
}

}  // namespace nines
