#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <map>
#include <numeric>
#include <ostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nines/error.hpp"
#include "nines/rational.hpp"

namespace nines {

// Index (a_1, ..., a_k) of the multiple zeta value
//   zeta(a_1, ..., a_k) = sum_{n_1 > ... > n_k >= 1} n_1^-a_1 ... n_k^-a_k.
// a_1 >= 2 so that the sum converges.
class MzvIndex {
public:
  MzvIndex(std::initializer_list<int> parts) : MzvIndex(std::vector<int>(parts)) {}
  explicit MzvIndex(std::vector<int> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw DomainError("MZV index must have at least one part");
    for (int p : parts_)
      if (p < 1) throw DomainError("MZV index parts must be positive");
    if (parts_.front() < 2) throw DomainError("MZV index " + to_string() + " diverges: first part must be >= 2");
  }

  const std::vector<int>& parts() const noexcept { return parts_; }
  int weight() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }
  int depth() const { return static_cast<int>(parts_.size()); }

  auto operator<=>(const MzvIndex&) const = default;

  std::string to_string() const {
    std::string s = "z(";
    for (std::size_t t = 0; t < parts_.size(); ++t) {
      if (t) s += ",";
      s += std::to_string(parts_[t]);
    }
    return s + ")";
  }

private:
  std::vector<int> parts_;
};

// Index (p_1 <= ... <= p_k; q) of the Euler sum
//   S_{p_1..p_k;q} = sum_n H_n^(p_1) ... H_n^(p_k) / n^q.
// The ps are stored sorted; construction never rejects unsorted input.
class EulerIndex {
public:
  EulerIndex(std::vector<int> ps, int q) : ps_(std::move(ps)), q_(q) {
    std::sort(ps_.begin(), ps_.end());
    for (int p : ps_)
      if (p < 1) throw DomainError("Euler sum harmonic orders must be >= 1");
    if (q_ < 2) throw DomainError("Euler sum denominator exponent q must be >= 2");
  }

  const std::vector<int>& ps() const noexcept { return ps_; }
  int q() const noexcept { return q_; }
  int weight() const { return std::accumulate(ps_.begin(), ps_.end(), q_); }

  auto operator<=>(const EulerIndex&) const = default;

  std::string to_string() const {
    std::string s = "S(";
    for (std::size_t t = 0; t < ps_.size(); ++t) {
      if (t) s += ",";
      s += std::to_string(ps_[t]);
    }
    return s + ";" + std::to_string(q_) + ")";
  }

private:
  std::vector<int> ps_;
  int q_;
};

// Rational linear combination of MZVs plus a rational constant. Terms iterate
// in descending lexicographic order of the parts list.
class MzvCombination {
public:
  using Terms = std::map<MzvIndex, Rational, std::greater<>>;

  MzvCombination() = default;
  explicit MzvCombination(const Rational& constant) : constant_(constant) {}
  MzvCombination(const MzvIndex& x, const Rational& c = 1) { add(x, c); }

  const Rational& constant() const noexcept { return constant_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const { return constant_ == 0 && terms_.empty(); }

  Rational coefficient(const MzvIndex& x) const {
    auto it = terms_.find(x);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add(const MzvIndex& x, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(x, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  void add_constant(const Rational& c) { constant_ += c; }

  MzvCombination& operator+=(const MzvCombination& o) {
    constant_ += o.constant_;
    for (const auto& [x, c] : o.terms_) add(x, c);
    return *this;
  }
  MzvCombination& operator-=(const MzvCombination& o) { return *this += o.scaled(-1); }
  friend MzvCombination operator+(MzvCombination x, const MzvCombination& y) { return x += y; }
  friend MzvCombination operator-(MzvCombination x, const MzvCombination& y) { return x -= y; }

  MzvCombination scaled(const Rational& s) const {
    MzvCombination r;
    if (s == 0) return r;
    r.constant_ = constant_ * s;
    for (const auto& [x, c] : terms_) r.terms_.emplace(x, c * s);
    return r;
  }

  friend bool operator==(const MzvCombination&, const MzvCombination&) = default;

  // Common weight of all MZV terms; nullopt when empty or mixed.
  std::optional<int> uniform_weight() const {
    std::optional<int> w;
    for (const auto& [x, c] : terms_) {
      if (w && *w != x.weight()) return std::nullopt;
      w = x.weight();
    }
    return w;
  }

  std::string to_string() const;

private:
  Rational constant_ = 0;
  Terms terms_;
};

// Product zeta(k_1) ... zeta(k_m) of single zeta values, stored as a sorted
// multiset. The empty monomial is the constant 1.
class ZetaMonomial {
public:
  ZetaMonomial() = default;
  ZetaMonomial(std::initializer_list<int> f) : ZetaMonomial(std::vector<int>(f)) {}
  explicit ZetaMonomial(std::vector<int> factors) : factors_(std::move(factors)) {
    for (int f : factors_)
      if (f < 2) throw DomainError("zeta(" + std::to_string(f) + ") is not a convergent single zeta value");
    std::sort(factors_.begin(), factors_.end());
  }

  const std::vector<int>& factors() const noexcept { return factors_; }
  bool is_one() const noexcept { return factors_.empty(); }
  int weight() const { return std::accumulate(factors_.begin(), factors_.end(), 0); }

  friend ZetaMonomial operator*(const ZetaMonomial& x, const ZetaMonomial& y) {
    std::vector<int> f = x.factors_;
    f.insert(f.end(), y.factors_.begin(), y.factors_.end());
    return ZetaMonomial(std::move(f));
  }

  auto operator<=>(const ZetaMonomial&) const = default;

  // "z(2)*z(3)"; the empty monomial prints as "1".
  std::string to_string() const {
    if (factors_.empty()) return "1";
    std::string s;
    for (std::size_t t = 0; t < factors_.size(); ++t) {
      if (t) s += "*";
      s += "z(" + std::to_string(factors_[t]) + ")";
    }
    return s;
  }

private:
  std::vector<int> factors_;
};

// Display order: higher weight first, then more factors, then factors
// ascending. Matches how the identities are usually written, e.g.
// 4 z(2)z(3) + 2 z(5) - 2 z(3).
struct MonomialDisplayOrder {
  bool operator()(const ZetaMonomial& x, const ZetaMonomial& y) const {
    if (x.weight() != y.weight()) return x.weight() > y.weight();
    if (x.factors().size() != y.factors().size()) return x.factors().size() > y.factors().size();
    return x.factors() < y.factors();
  }
};

// Polynomial over Q in single zeta values.
class ZetaPolynomial {
public:
  using Terms = std::map<ZetaMonomial, Rational, MonomialDisplayOrder>;

  ZetaPolynomial() = default;
  explicit ZetaPolynomial(const Rational& c) { add(ZetaMonomial{}, c); }
  ZetaPolynomial(const ZetaMonomial& m, const Rational& c) { add(m, c); }

  static ZetaPolynomial zeta(int s) { return ZetaPolynomial(ZetaMonomial{s}, 1); }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Rational coefficient(const ZetaMonomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add(const ZetaMonomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  ZetaPolynomial& operator+=(const ZetaPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  ZetaPolynomial& operator-=(const ZetaPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }
  friend ZetaPolynomial operator+(ZetaPolynomial x, const ZetaPolynomial& y) { return x += y; }
  friend ZetaPolynomial operator-(ZetaPolynomial x, const ZetaPolynomial& y) { return x -= y; }
  friend ZetaPolynomial operator*(const ZetaPolynomial& x, const ZetaPolynomial& y) {
    ZetaPolynomial r;
    for (const auto& [m1, c1] : x.terms_)
      for (const auto& [m2, c2] : y.terms_) r.add(m1 * m2, c1 * c2);
    return r;
  }

  ZetaPolynomial scaled(const Rational& s) const {
    ZetaPolynomial r;
    for (const auto& [m, c] : terms_) r.add(m, c * s);
    return r;
  }

  friend bool operator==(const ZetaPolynomial&, const ZetaPolynomial&) = default;

  std::string to_string() const;

private:
  Terms terms_;
};

namespace detail {

inline void append_signed_term(std::string& out, const Rational& c, const std::string& body) {
  const bool neg = c < 0;
  const Rational mag = neg ? Rational(-c) : c;
  if (out.empty())
    out += neg ? "-" : "";
  else
    out += neg ? " - " : " + ";
  if (body.empty() || body == "1")
    out += nines::to_string(mag);
  else if (mag == 1)
    out += body;
  else
    out += nines::to_string(mag) + "*" + body;
}

}  // namespace detail

inline std::string MzvCombination::to_string() const {
  std::string out;
  for (const auto& [x, c] : terms_) detail::append_signed_term(out, c, x.to_string());
  if (constant_ != 0) detail::append_signed_term(out, constant_, "");
  return out.empty() ? "0" : out;
}

inline std::string ZetaPolynomial::to_string() const {
  std::string out;
  for (const auto& [m, c] : terms_) detail::append_signed_term(out, c, m.to_string());
  return out.empty() ? "0" : out;
}

inline std::ostream& operator<<(std::ostream& os, const MzvIndex& x) { return os << x.to_string(); }
inline std::ostream& operator<<(std::ostream& os, const EulerIndex& x) { return os << x.to_string(); }
inline std::ostream& operator<<(std::ostream& os, const MzvCombination& x) { return os << x.to_string(); }
inline std::ostream& operator<<(std::ostream& os, const ZetaMonomial& x) { return os << x.to_string(); }
inline std::ostream& operator<<(std::ostream& os, const ZetaPolynomial& x) { return os << x.to_string(); }

// Two-letter word encoding of an index: (a_1..a_k) -> x^(a_1-1) y ... x^(a_k-1) y.
class BinaryWord {
public:
  enum class Letter : char { x = 'x', y = 'y' };

  BinaryWord() = default;
  explicit BinaryWord(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  static BinaryWord encode(const MzvIndex& index) {
    std::vector<Letter> w;
    for (int a : index.parts()) {
      w.insert(w.end(), static_cast<std::size_t>(a - 1), Letter::x);
      w.push_back(Letter::y);
    }
    return BinaryWord(std::move(w));
  }

  const std::vector<Letter>& letters() const noexcept { return letters_; }

  bool encodes_index() const {
    return !letters_.empty() && letters_.front() == Letter::x && letters_.back() == Letter::y;
  }

  MzvIndex decode() const {
    if (!encodes_index()) throw DomainError("word " + to_string() + " does not encode a convergent MZV index");
    std::vector<int> parts;
    int run = 0;
    for (Letter l : letters_) {
      if (l == Letter::x) {
        ++run;
      } else {
        parts.push_back(run + 1);
        run = 0;
      }
    }
    return MzvIndex(std::move(parts));
  }

  // Reverse the word and exchange x <-> y.
  BinaryWord dual() const {
    std::vector<Letter> w(letters_.rbegin(), letters_.rend());
    for (auto& l : w) l = l == Letter::x ? Letter::y : Letter::x;
    return BinaryWord(std::move(w));
  }

  std::string to_string() const {
    std::string s;
    for (Letter l : letters_) s += static_cast<char>(l);
    return s;
  }

private:
  std::vector<Letter> letters_;
};

// All indices of the given weight: compositions with first part >= 2, ordered
// by depth, then descending lexicographically. There are 2^(weight-2).
inline std::vector<MzvIndex> enumerate_indices(int weight) {
  if (weight < 2) throw DomainError("enumerate_indices: weight must be >= 2");
  std::vector<std::vector<int>> all;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int remaining) {
    if (remaining == 0) {
      all.push_back(cur);
      return;
    }
    for (int p = remaining; p >= 1; --p) {
      if (cur.empty() && p < 2) continue;
      cur.push_back(p);
      rec(remaining - p);
      cur.pop_back();
    }
  };
  rec(weight);
  std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.size() < y.size(); });
  std::vector<MzvIndex> out;
  out.reserve(all.size());
  for (auto& p : all) out.emplace_back(std::move(p));
  return out;
}

namespace detail {

using Word = std::vector<int>;
using WordCombination = std::map<Word, Rational>;

// Quasi-shuffle of words over the positive integers, reading the first letter
// as the outermost (largest) summation variable:
//   (a u) * (b v) = a (u * b v) + b (a u * v) + (a+b) (u * v).
inline WordCombination quasi_shuffle(const Word& u, const Word& v) {
  if (u.empty()) return {{v, Rational(1)}};
  if (v.empty()) return {{u, Rational(1)}};
  WordCombination out;
  auto prepend = [&](int letter, const WordCombination& rest) {
    for (const auto& [w, c] : rest) {
      Word nw;
      nw.reserve(w.size() + 1);
      nw.push_back(letter);
      nw.insert(nw.end(), w.begin(), w.end());
      out[nw] += c;
    }
  };
  const Word ut(u.begin() + 1, u.end()), vt(v.begin() + 1, v.end());
  prepend(u[0], quasi_shuffle(ut, v));
  prepend(v[0], quasi_shuffle(u, vt));
  prepend(u[0] + v[0], quasi_shuffle(ut, vt));
  return out;
}

inline WordCombination quasi_shuffle(const WordCombination& x, const WordCombination& y) {
  WordCombination out;
  for (const auto& [u, cu] : x)
    for (const auto& [v, cv] : y)
      for (const auto& [w, c] : quasi_shuffle(u, v)) out[w] += cu * cv * c;
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

}  // namespace detail

// Stuffle (quasi-shuffle) product of two MZVs.
inline MzvCombination stuffle(const MzvIndex& x, const MzvIndex& y) {
  MzvCombination out;
  for (const auto& [w, c] : detail::quasi_shuffle(x.parts(), y.parts())) out.add(MzvIndex(w), c);
  return out;
}

// Stuffle product extended bilinearly; constants multiply through.
inline MzvCombination stuffle(const MzvCombination& x, const MzvCombination& y) {
  MzvCombination out(x.constant() * y.constant());
  for (const auto& [ix, cx] : x.terms()) out.add(ix, cx * y.constant());
  for (const auto& [iy, cy] : y.terms()) out.add(iy, cy * x.constant());
  for (const auto& [ix, cx] : x.terms())
    for (const auto& [iy, cy] : y.terms()) out += stuffle(ix, iy).scaled(cx * cy);
  return out;
}

// Left fold of stuffle over the factors; the empty product is 1.
inline MzvCombination expand_monomial(const ZetaMonomial& m) {
  MzvCombination acc(Rational(1));
  for (int f : m.factors()) acc = stuffle(acc, MzvCombination(MzvIndex{f}));
  return acc;
}

inline MzvCombination expand_polynomial(const ZetaPolynomial& p) {
  MzvCombination out;
  for (const auto& [m, c] : p.terms()) out += expand_monomial(m).scaled(c);
  return out;
}

// Expansion of an Euler sum into MZVs. The product H_n^(p_1)...H_n^(p_k) of
// truncated sums over 1 <= j <= n is itself a quasi-shuffle of one-letter
// words; each resulting truncated sum Z_n(b_1..b_m) is then split on whether
// its outermost variable equals n or lies below it:
//   sum_n n^-q Z_n(b_1..b_m) = zeta(q + b_1, b_2..b_m) + zeta(q, b_1..b_m).
inline MzvCombination euler_to_mzv(const EulerIndex& e) {
  detail::WordCombination product{{detail::Word{}, Rational(1)}};
  for (int p : e.ps()) product = detail::quasi_shuffle(product, detail::WordCombination{{detail::Word{p}, Rational(1)}});
  MzvCombination out;
  for (const auto& [w, c] : product) {
    if (w.empty()) {
      out.add(MzvIndex{e.q()}, c);
      continue;
    }
    detail::Word merged = w;
    merged[0] += e.q();
    out.add(MzvIndex(merged), c);
    detail::Word longer{e.q()};
    longer.insert(longer.end(), w.begin(), w.end());
    out.add(MzvIndex(longer), c);
  }
  return out;
}

inline MzvIndex dual(const MzvIndex& x) { return BinaryWord::encode(x).dual().decode(); }

struct SumRelation {
  MzvCombination lhs;
  MzvIndex rhs;
};

// Sum of all MZVs of the given weight and depth equals zeta(weight).
inline SumRelation sum_relation(int weight, int depth) {
  if (weight < 3) throw DomainError("sum_relation: weight must be >= 3");
  if (depth < 2 || depth > weight - 1)
    throw DomainError("sum_relation: depth " + std::to_string(depth) + " outside [2, " + std::to_string(weight - 1) + "]");
  MzvCombination lhs;
  for (const auto& x : enumerate_indices(weight))
    if (x.depth() == depth) lhs.add(x, 1);
  return {std::move(lhs), MzvIndex{weight}};
}

// Every multi-factor monomial in single zeta values of total weight `weight`,
// factors sorted ascending.
inline std::vector<ZetaMonomial> product_monomials(int weight, int min_factors = 2) {
  std::vector<ZetaMonomial> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int remaining, int min_part) {
    if (remaining == 0) {
      if (static_cast<int>(cur.size()) >= min_factors) out.emplace_back(cur);
      return;
    }
    for (int p = min_part; p <= remaining; ++p) {
      if (remaining - p != 0 && remaining - p < p) continue;
      cur.push_back(p);
      rec(remaining - p, p);
      cur.pop_back();
    }
  };
  rec(weight, 2);
  return out;
}

}  // namespace nines
