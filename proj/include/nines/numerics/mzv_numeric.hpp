#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "nines/mzv.hpp"
#include "nines/numerics/bigfloat.hpp"
#include "nines/numerics/zeta.hpp"
#include "nines/zeta_expr.hpp"

namespace nines {

inline constexpr int kMzvMaxWeight = 12;
inline constexpr int kMzvMaxDigits = 100;

namespace detail {

// Li_{a_1..a_d}(1/2) = sum_{n_1 > ... > n_d >= 1} 2^-n_1 / (n_1^a_1 ... n_d^a_d)
// for any parts a_i >= 1. Inner levels are tabulated as running sums, so the
// cost is O(d N). The outer 2^-n makes the truncation error geometric.
inline BigFloat polylog_half(const std::vector<int>& parts, int n_cut) {
  std::vector<BigFloat> below(n_cut + 2, BigFloat(1));  // depth-0 value is 1
  for (int level = static_cast<int>(parts.size()) - 1; level >= 0; --level) {
    std::vector<BigFloat> next(n_cut + 2, BigFloat(0));
    BigFloat acc = 0;
    BigFloat half_pow = 1;
    for (int n = 1; n <= n_cut; ++n) {
      BigFloat w = below[n] / boost::multiprecision::pow(BigFloat(n), parts[level]);
      if (level == 0) {
        half_pow /= 2;
        w *= half_pow;
      }
      acc += w;
      next[n + 1] = acc;
    }
    below = std::move(next);
  }
  return below[n_cut + 1];
}

}  // namespace detail

// zeta(a_1..a_k) by the Hoelder convolution at p = 1/2: with w the binary
// word of the index,
//   zeta(w) = sum_{j=0}^{|w|} L(dual(w[0..j))) L(w[j..]),
// where L(u) = Li_u(1/2) (L of the empty word is 1) and dual() reverses and
// swaps letters. Every factor converges like 2^-n.
inline BigFloat mzv_numeric(const MzvIndex& x, int digits) {
  if (x.weight() > kMzvMaxWeight) throw DomainError("mzv_numeric supports weight <= 12, got " + x.to_string());
  if (digits < 1 || digits > kMzvMaxDigits) throw DomainError("mzv_numeric digits must be in 1..100");
  if (x.depth() == 1) return zeta_single(x.parts()[0], digits);

  static std::mutex m;
  static std::map<std::pair<std::vector<int>, int>, BigFloat> cache;
  {
    std::lock_guard lock(m);
    auto it = cache.find({x.parts(), digits});
    if (it != cache.end()) return it->second;
  }

  PrecisionScope scope(digits + kGuardDigits);
  // 2^-N (1 + ln N)^weight < 10^-(digits+5) with room to spare.
  const int n_cut = static_cast<int>(std::ceil((digits + kGuardDigits) * std::log2(10.0))) + 4 * x.weight() + 16;
  const BinaryWord w = BinaryWord::encode(x);
  const auto& letters = w.letters();
  using Letter = BinaryWord::Letter;
  auto li = [&](const std::vector<Letter>& word) -> BigFloat {
    if (word.empty()) return BigFloat(1);
    std::vector<int> parts;
    int run = 0;
    for (Letter l : word) {
      if (l == Letter::y) {
        parts.push_back(run + 1);
        run = 0;
      } else {
        ++run;
      }
    }
    return detail::polylog_half(parts, n_cut);
  };
  BigFloat total = 0;
  for (std::size_t j = 0; j <= letters.size(); ++j) {
    std::vector<Letter> head;
    for (std::size_t t = j; t-- > 0;) head.push_back(letters[t] == Letter::x ? Letter::y : Letter::x);
    const std::vector<Letter> tail(letters.begin() + static_cast<std::ptrdiff_t>(j), letters.end());
    total += li(head) * li(tail);
  }
  std::lock_guard lock(m);
  cache.emplace(std::pair{x.parts(), digits}, total);
  return total;
}

inline BigFloat evaluate(const ZetaMonomial& mono, int digits) {
  PrecisionScope scope(digits + kGuardDigits);
  BigFloat v = 1;
  for (int f : mono.factors()) v *= zeta_single(f, digits + 5);
  return v;
}

inline BigFloat evaluate(const ZetaPolynomial& p, int digits) {
  PrecisionScope scope(digits + kGuardDigits);
  BigFloat v = 0;
  for (const auto& [mono, c] : p.terms()) v += to_bigfloat(c) * evaluate(mono, digits + 5);
  return v;
}

inline BigFloat evaluate(const MzvCombination& c, int digits) {
  PrecisionScope scope(digits + kGuardDigits);
  BigFloat v = to_bigfloat(c.constant());
  for (const auto& [x, q] : c.terms()) v += to_bigfloat(q) * mzv_numeric(x, digits + 5);
  return v;
}

inline BigFloat evaluate(const ZetaExpression& e, int digits) {
  PrecisionScope scope(digits + kGuardDigits);
  BigFloat v = 0;
  for (const auto& [t, q] : e.terms()) {
    BigFloat term = to_bigfloat(q) * evaluate(t.prefactor, digits + 5);
    if (t.mzv) term *= mzv_numeric(*t.mzv, digits + 5);
    v += term;
  }
  return v;
}

}  // namespace nines
