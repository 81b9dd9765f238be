#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nines/error.hpp"
#include "nines/rational.hpp"

namespace nines {

// Index into the process-wide variable table. The table fixes a global
// variable order: a, b, j, k, i come first, anything else is appended on first
// use. Lower ids are more significant in the lexicographic term order.
class Var {
public:
  constexpr Var() = default;
  constexpr explicit Var(std::uint32_t id) : id_(id) {}

  constexpr std::uint32_t id() const noexcept { return id_; }
  constexpr auto operator<=>(const Var&) const = default;

  static Var named(const std::string& name);
  const std::string& name() const;

private:
  std::uint32_t id_ = 0;
};

namespace detail {

class VariableTable {
public:
  static VariableTable& instance() {
    static VariableTable table;
    return table;
  }

  std::uint32_t intern(const std::string& name) {
    std::lock_guard lock(mutex_);
    for (std::uint32_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    names_.push_back(name);
    return static_cast<std::uint32_t>(names_.size() - 1);
  }

  const std::string& name(std::uint32_t id) const {
    std::lock_guard lock(mutex_);
    if (id >= names_.size()) throw DomainError("unknown variable id " + std::to_string(id));
    return names_[id];
  }

private:
  VariableTable() : names_{"a", "b", "j", "k", "i"} {}

  mutable std::mutex mutex_;
  // deque: references handed out by name() stay valid across appends.
  std::deque<std::string> names_;
};

}  // namespace detail

inline Var Var::named(const std::string& name) { return Var(detail::VariableTable::instance().intern(name)); }
inline const std::string& Var::name() const { return detail::VariableTable::instance().name(id_); }

namespace vars {
inline const Var a{0};
inline const Var b{1};
inline const Var j{2};
inline const Var k{3};
// Bound summation index used inside atom definitions.
inline const Var i{4};
}  // namespace vars

// Dense exponent vector indexed by Var id, trailing zeros trimmed so that
// equal monomials have identical representations.
class Exponents {
public:
  Exponents() = default;

  static Exponents of(Var v, std::uint32_t power = 1) {
    Exponents e;
    if (power == 0) return e;
    e.e_.assign(v.id() + 1, 0);
    e.e_[v.id()] = power;
    return e;
  }

  std::uint32_t operator[](Var v) const { return v.id() < e_.size() ? e_[v.id()] : 0; }
  std::size_t arity() const { return e_.size(); }
  bool is_one() const { return e_.empty(); }

  std::uint32_t total_degree() const {
    std::uint32_t d = 0;
    for (auto x : e_) d += x;
    return d;
  }

  void set(Var v, std::uint32_t power) {
    if (v.id() >= e_.size()) {
      if (power == 0) return;
      e_.resize(v.id() + 1, 0);
    }
    e_[v.id()] = power;
    trim();
  }

  Exponents operator*(const Exponents& o) const {
    Exponents r;
    r.e_.assign(std::max(e_.size(), o.e_.size()), 0);
    for (std::size_t t = 0; t < e_.size(); ++t) r.e_[t] += e_[t];
    for (std::size_t t = 0; t < o.e_.size(); ++t) r.e_[t] += o.e_[t];
    return r;
  }

  bool divides(const Exponents& o) const {
    if (e_.size() > o.e_.size()) return false;
    for (std::size_t t = 0; t < e_.size(); ++t)
      if (e_[t] > o.e_[t]) return false;
    return true;
  }

  // Precondition: divides(o).
  Exponents quotient_of(const Exponents& o) const {
    Exponents r;
    r.e_ = o.e_;
    for (std::size_t t = 0; t < e_.size(); ++t) r.e_[t] -= e_[t];
    r.trim();
    return r;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t t = 0; t < e_.size(); ++t)
      if (e_[t] != 0) f(Var(static_cast<std::uint32_t>(t)), e_[t]);
  }

  // Lexicographic with lower variable ids more significant, missing entries
  // read as zero.
  friend std::strong_ordering operator<=>(const Exponents& x, const Exponents& y) {
    const std::size_t n = std::max(x.e_.size(), y.e_.size());
    for (std::size_t t = 0; t < n; ++t) {
      const std::uint32_t xv = t < x.e_.size() ? x.e_[t] : 0;
      const std::uint32_t yv = t < y.e_.size() ? y.e_[t] : 0;
      if (xv != yv) return xv <=> yv;
    }
    return std::strong_ordering::equal;
  }
  friend bool operator==(const Exponents& x, const Exponents& y) { return (x <=> y) == 0; }

private:
  void trim() {
    while (!e_.empty() && e_.back() == 0) e_.pop_back();
  }

  std::vector<std::uint32_t> e_;
};

// Multivariate polynomial over Q. Zero coefficients are never stored; the
// leading term is the lexicographically largest exponent vector.
class Polynomial {
public:
  using Terms = std::map<Exponents, Rational>;

  Polynomial() = default;
  Polynomial(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) terms_.emplace(Exponents{}, c);
  }
  Polynomial(long c) : Polynomial(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  Polynomial(int c) : Polynomial(Rational(c)) {}   // NOLINT(google-explicit-constructor)

  static Polynomial variable(Var v) { return monomial(Exponents::of(v), Rational(1)); }

  static Polynomial monomial(const Exponents& e, const Rational& c) {
    Polynomial p;
    if (c != 0) p.terms_.emplace(e, c);
    return p;
  }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }

  Rational constant_value() const {
    auto it = terms_.find(Exponents{});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  const Rational& leading_coefficient() const {
    if (terms_.empty()) throw DomainError("leading coefficient of the zero polynomial");
    return terms_.rbegin()->second;
  }
  const Exponents& leading_exponents() const {
    if (terms_.empty()) throw DomainError("leading term of the zero polynomial");
    return terms_.rbegin()->first;
  }

  std::uint32_t degree(Var v) const {
    std::uint32_t d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[v]);
    return d;
  }

  std::uint32_t total_degree() const {
    std::uint32_t d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e.total_degree());
    return d;
  }

  std::set<Var> variables() const {
    std::set<Var> out;
    for (const auto& [e, c] : terms_) e.for_each([&](Var v, std::uint32_t) { out.insert(v); });
    return out;
  }

  bool contains(Var v) const { return degree(v) > 0; }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend Polynomial operator+(Polynomial x, const Polynomial& y) { return x += y; }
  friend Polynomial operator-(Polynomial x, const Polynomial& y) { return x -= y; }

  friend Polynomial operator*(const Polynomial& x, const Polynomial& y) {
    Polynomial r;
    for (const auto& [ex, cx] : x.terms_)
      for (const auto& [ey, cy] : y.terms_) r.add_term(ex * ey, cx * cy);
    return r;
  }

  Polynomial scaled(const Rational& c) const {
    if (c == 0) return {};
    Polynomial r = *this;
    for (auto& [e, v] : r.terms_) v *= c;
    return r;
  }

  Polynomial pow(unsigned n) const {
    Polynomial r(1), base = *this;
    while (n) {
      if (n & 1u) r *= base;
      n >>= 1u;
      if (n) base *= base;
    }
    return r;
  }

  friend bool operator==(const Polynomial& x, const Polynomial& y) { return x.terms_ == y.terms_; }

  // Total order on representations; only used to key containers.
  friend bool operator<(const Polynomial& x, const Polynomial& y) {
    return std::lexicographical_compare(x.terms_.begin(), x.terms_.end(), y.terms_.begin(), y.terms_.end(),
                                        [](const auto& p, const auto& q) {
                                          if (p.first != q.first) return p.first < q.first;
                                          return p.second < q.second;
                                        });
  }

  void add_term(const Exponents& e, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  // Coefficients with respect to `v`: result[d] is the coefficient of v^d.
  std::vector<Polynomial> coefficients_in(Var v) const {
    std::vector<Polynomial> out(degree(v) + 1);
    for (const auto& [e, c] : terms_) {
      Exponents rest = e;
      const auto d = e[v];
      rest.set(v, 0);
      out[d].add_term(rest, c);
    }
    return out;
  }

  static Polynomial from_coefficients(Var v, const std::vector<Polynomial>& coeffs) {
    Polynomial r;
    for (std::size_t d = 0; d < coeffs.size(); ++d) {
      const Exponents xd = Exponents::of(v, static_cast<std::uint32_t>(d));
      for (const auto& [e, c] : coeffs[d].terms_) r.add_term(e * xd, c);
    }
    return r;
  }

  Rational evaluate(const std::map<Var, Rational>& point) const {
    Rational sum = 0;
    for (const auto& [e, c] : terms_) {
      Rational term = c;
      e.for_each([&](Var v, std::uint32_t p) {
        auto it = point.find(v);
        if (it == point.end()) throw DomainError("no value for variable '" + v.name() + "'");
        term *= rat_pow(it->second, p);
      });
      sum += term;
    }
    return sum;
  }

  // Simultaneous substitution of variables by polynomials.
  Polynomial substitute(const std::map<Var, Polynomial>& images) const {
    Polynomial r;
    for (const auto& [e, c] : terms_) {
      Polynomial term(c);
      Exponents kept;
      e.for_each([&](Var v, std::uint32_t p) {
        auto it = images.find(v);
        if (it == images.end())
          kept.set(v, p);
        else
          term *= it->second.pow(p);
      });
      r += term * monomial(kept, Rational(1));
    }
    return r;
  }

  Polynomial substitute(Var v, const Polynomial& image) const { return substitute(std::map<Var, Polynomial>{{v, image}}); }

  // p(v -> v + offset)
  Polynomial shifted(Var v, const Rational& offset) const {
    if (offset == 0 || !contains(v)) return *this;
    return substitute(v, variable(v) + Polynomial(offset));
  }

  // Exact multivariate division; nullopt when `d` does not divide `*this`.
  std::optional<Polynomial> divide_exact(const Polynomial& d) const {
    if (d.is_zero()) throw ArithmeticError("polynomial division by zero");
    if (d.is_constant()) return scaled(Rational(1) / d.constant_value());
    Polynomial rem = *this, quot;
    const Exponents& dl = d.leading_exponents();
    const Rational& dc = d.leading_coefficient();
    while (!rem.is_zero()) {
      const Exponents& rl = rem.leading_exponents();
      if (!dl.divides(rl)) return std::nullopt;
      const Polynomial q = monomial(dl.quotient_of(rl), rem.leading_coefficient() / dc);
      quot += q;
      rem -= q * d;
    }
    return quot;
  }

  // Rational content: positive c such that *this / c has coprime integer
  // coefficients. Zero for the zero polynomial.
  Rational rational_content() const {
    if (terms_.empty()) return 0;
    Integer num = 0, den = 1;
    for (const auto& [e, c] : terms_) {
      num = gcd(num, numerator_of(c));
      den = lcm(den, denominator_of(c));
    }
    return Rational(num, den);
  }

  // Integer coefficients with gcd 1 and positive leading coefficient.
  Polynomial primitive_integer_part() const {
    if (terms_.empty()) return {};
    Rational c = rational_content();
    if (leading_coefficient() < 0) c = -c;
    return scaled(Rational(1) / c);
  }

  std::string to_string() const;

private:
  Terms terms_;
};

namespace detail {

// Pseudo-remainder of p by q in variable v (q must contain v).
inline Polynomial pseudo_remainder(const Polynomial& p, const Polynomial& q, Var v) {
  std::vector<Polynomial> r = p.coefficients_in(v);
  const std::vector<Polynomial> d = q.coefficients_in(v);
  const std::size_t dq = d.size() - 1;
  const Polynomial& lc = d.back();
  while (!r.empty() && r.back().is_zero()) r.pop_back();
  while (r.size() > dq) {
    const Polynomial lead = r.back();
    const std::size_t shift = r.size() - 1 - dq;
    for (auto& coeff : r) coeff *= lc;
    for (std::size_t t = 0; t <= dq; ++t) r[shift + t] -= lead * d[t];
    while (!r.empty() && r.back().is_zero()) r.pop_back();
  }
  return Polynomial::from_coefficients(v, r);
}

Polynomial gcd_impl(const Polynomial& p, const Polynomial& q);

// gcd of the coefficients of p viewed as a polynomial in v.
inline Polynomial content_in(const Polynomial& p, Var v) {
  Polynomial g;
  for (const auto& c : p.coefficients_in(v)) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? c : gcd_impl(g, c);
    if (g.is_constant()) return Polynomial(1);
  }
  return g;
}

inline Polynomial primitive_in(const Polynomial& p, Var v) {
  const Polynomial c = content_in(p, v);
  auto q = p.divide_exact(c);
  if (!q) throw ArithmeticError("internal: content does not divide polynomial");
  return q->primitive_integer_part();
}

// Degree of the gcd of two univariate polynomials over Q (coefficient
// vectors, constant term first, no trailing zeros).
inline std::size_t univariate_gcd_degree(std::vector<Rational> x, std::vector<Rational> y) {
  if (x.size() < y.size()) std::swap(x, y);
  while (!y.empty()) {
    while (x.size() >= y.size()) {
      const Rational f = x.back() / y.back();
      const std::size_t shift = x.size() - y.size();
      for (std::size_t t = 0; t < y.size(); ++t) x[shift + t] -= f * y[t];
      while (!x.empty() && x.back() == 0) x.pop_back();
      if (x.empty()) break;
    }
    std::swap(x, y);
  }
  return x.empty() ? 0 : x.size() - 1;
}

// Upper bound on deg_v gcd(p, q). With the other variables specialized at a
// point where lc_v(p) does not vanish, g(v, r) divides both images and keeps
// its degree, so deg_v g is at most the degree of the univariate gcd.
inline std::size_t gcd_degree_bound(const Polynomial& p, const Polynomial& q, Var v) {
  std::set<Var> others = p.variables();
  for (Var w : q.variables()) others.insert(w);
  others.erase(v);
  static constexpr long kPoints[][4] = {{3, 7, 13, 19}, {5, 11, 2, 23}, {17, 4, 29, 8}};
  std::size_t bound = std::min(p.degree(v), q.degree(v));
  for (const auto& pt : kPoints) {
    std::map<Var, Rational> point;
    std::size_t n = 0;
    for (Var w : others) {
      point.emplace(w, Rational(pt[n % 4] + static_cast<long>(n / 4)));
      ++n;
    }
    auto image = [&](const Polynomial& f) {
      std::vector<Rational> c;
      for (const auto& coeff : f.coefficients_in(v)) c.push_back(coeff.evaluate(point));
      while (!c.empty() && c.back() == 0) c.pop_back();
      return c;
    };
    std::vector<Rational> pi = image(p), qi = image(q);
    if (pi.size() != p.degree(v) + 1 || qi.empty()) continue;
    bound = std::min(bound, univariate_gcd_degree(std::move(pi), std::move(qi)));
    if (bound == 0) break;
  }
  return bound;
}

inline Polynomial gcd_impl(const Polynomial& p, const Polynomial& q) {
  if (p.is_zero()) return q.primitive_integer_part();
  if (q.is_zero()) return p.primitive_integer_part();
  if (p.is_constant() || q.is_constant()) return Polynomial(1);
  // A linear polynomial is irreducible: the gcd is it or 1.
  if (q.total_degree() == 1) return p.divide_exact(q) ? q.primitive_integer_part() : Polynomial(1);
  if (p.total_degree() == 1) return q.divide_exact(p) ? p.primitive_integer_part() : Polynomial(1);

  // Any common factor lives in the shared variables.
  std::vector<Var> shared;
  for (Var w : p.variables())
    if (q.contains(w)) shared.push_back(w);
  if (shared.empty()) return Polynomial(1);
  // A variable of only one input, or one where the degree bound is 0, is
  // absent from the gcd.
  std::optional<Var> free_of;
  for (Var w : p.variables())
    if (!q.contains(w)) free_of = w;
  for (Var w : q.variables())
    if (!p.contains(w)) free_of = w;
  if (!free_of)
    for (Var w : shared)
      if (gcd_degree_bound(p, q, w) == 0) free_of = w;
  if (free_of) {
    // The gcd is free of w: fold it over the w-coefficients of p and q.
    std::vector<Polynomial> cs = p.coefficients_in(*free_of);
    for (auto& c : q.coefficients_in(*free_of)) cs.push_back(std::move(c));
    std::erase_if(cs, [](const Polynomial& c) { return c.is_zero(); });
    std::sort(cs.begin(), cs.end(), [](const Polynomial& x, const Polynomial& y) { return x.terms().size() < y.terms().size(); });
    Polynomial g = cs.front();
    for (std::size_t t = 1; t < cs.size() && !g.is_constant(); ++t) g = gcd_impl(g, cs[t]);
    return g.is_constant() ? Polynomial(1) : g.primitive_integer_part();
  }
  // Shortest remainder sequence: the variable of least degree in either input.
  Var v = shared.back();
  for (Var w : shared)
    if (std::min(p.degree(w), q.degree(w)) < std::min(p.degree(v), q.degree(v))) v = w;

  // y has the lower degree in v. With y = cy * yy, cy free of v and yy
  // primitive in v: gcd(x, y) = gcd(x, cy) * gcd(x, yy). The content of the
  // (typically larger) x is never formed.
  Polynomial x = p, y = q;
  if (x.degree(v) < y.degree(v)) std::swap(x, y);
  const Polynomial cy = content_in(y, v);
  // cy is free of v, so gcd(x, cy) folds over the v-coefficients of x.
  Polynomial cg = cy;
  for (const auto& c : x.coefficients_in(v)) {
    if (cg.is_constant()) break;
    if (!c.is_zero()) cg = gcd_impl(cg, c);
  }
  Polynomial b = *y.divide_exact(cy);
  // Euclid with a primitive divisor: gcd(a, b) = gcd(b, pp(prem(a, b))),
  // since every factor of b has positive degree in v.
  Polynomial a = std::move(x);
  for (;;) {
    Polynomial r = pseudo_remainder(a, b, v);
    if (r.is_zero()) break;
    if (r.degree(v) == 0) {
      b = Polynomial(1);
      break;
    }
    a = std::move(b);
    b = primitive_in(r, v);
  }
  return (b * cg).primitive_integer_part();
}

}  // namespace detail

// Greatest common divisor, normalized to integer coefficients with content 1
// and positive leading coefficient. gcd(0, 0) = 0.
inline Polynomial gcd(const Polynomial& p, const Polynomial& q) {
  if (p.is_zero() && q.is_zero()) return {};
  return detail::gcd_impl(p, q);
}

inline std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    std::string mono;
    e.for_each([&](Var v, std::uint32_t p) {
      if (!mono.empty()) mono += "*";
      mono += v.name();
      if (p > 1) mono += "^" + std::to_string(p);
    });
    if (mono.empty()) {
      out += nines::to_string(mag);
    } else if (mag == 1) {
      out += mono;
    } else {
      out += nines::to_string(mag) + "*" + mono;
    }
  }
  return out;
}

}  // namespace nines
