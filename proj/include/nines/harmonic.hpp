#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nines/error.hpp"
#include "nines/polynomial.hpp"
#include "nines/rational.hpp"
#include "nines/rational_function.hpp"

namespace nines {

// One occurrence of a nested-sum atom: atom(var + shift; params...).
struct AtomInstance {
  std::uint32_t atom = 0;
  Var var;
  int shift = 0;
  std::vector<Var> params;

  auto operator<=>(const AtomInstance&) const = default;
};

// Product of atom instances with positive powers, sorted by instance.
class AtomMonomial {
public:
  using Factors = std::vector<std::pair<AtomInstance, unsigned>>;

  AtomMonomial() = default;
  explicit AtomMonomial(const AtomInstance& x, unsigned power = 1) {
    if (power > 0) factors_.emplace_back(x, power);
  }

  const Factors& factors() const noexcept { return factors_; }
  bool is_one() const noexcept { return factors_.empty(); }

  friend AtomMonomial operator*(const AtomMonomial& x, const AtomMonomial& y) {
    AtomMonomial r;
    auto i = x.factors_.begin(), j = y.factors_.begin();
    while (i != x.factors_.end() || j != y.factors_.end()) {
      if (j == y.factors_.end() || (i != x.factors_.end() && i->first < j->first)) {
        r.factors_.push_back(*i++);
      } else if (i == x.factors_.end() || j->first < i->first) {
        r.factors_.push_back(*j++);
      } else {
        r.factors_.emplace_back(i->first, i->second + j->second);
        ++i;
        ++j;
      }
    }
    return r;
  }

  auto operator<=>(const AtomMonomial&) const = default;

private:
  Factors factors_;
};

// Linear combination of atom monomials with rational-function coefficients.
class SymExpr {
public:
  using Terms = std::map<AtomMonomial, RationalFunction>;

  SymExpr() = default;
  SymExpr(const RationalFunction& c) { add(AtomMonomial{}, c); }  // NOLINT(google-explicit-constructor)
  SymExpr(const Polynomial& p) : SymExpr(RationalFunction(p)) {}  // NOLINT(google-explicit-constructor)
  SymExpr(const Rational& c) : SymExpr(RationalFunction(c)) {}    // NOLINT(google-explicit-constructor)
  SymExpr(long c) : SymExpr(Rational(c)) {}                        // NOLINT(google-explicit-constructor)
  SymExpr(int c) : SymExpr(Rational(c)) {}                         // NOLINT(google-explicit-constructor)

  static SymExpr variable(Var v) { return SymExpr(RationalFunction::variable(v)); }
  static SymExpr atom(const AtomInstance& x) {
    SymExpr e;
    e.add(AtomMonomial(x), RationalFunction(1));
    return e;
  }
  static SymExpr term(const AtomMonomial& m, const RationalFunction& c) {
    SymExpr e;
    e.add(m, c);
    return e;
  }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  void add(const AtomMonomial& m, const RationalFunction& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (inserted) return;
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  SymExpr operator-() const {
    SymExpr r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }
  friend SymExpr operator+(SymExpr x, const SymExpr& y) {
    for (const auto& [m, c] : y.terms_) x.add(m, c);
    return x;
  }
  friend SymExpr operator-(const SymExpr& x, const SymExpr& y) { return x + (-y); }
  friend SymExpr operator*(const SymExpr& x, const SymExpr& y) {
    SymExpr r;
    for (const auto& [m1, c1] : x.terms_)
      for (const auto& [m2, c2] : y.terms_) r.add(m1 * m2, c1 * c2);
    return r;
  }
  SymExpr& operator+=(const SymExpr& y) { return *this = *this + y; }
  SymExpr& operator-=(const SymExpr& y) { return *this = *this - y; }
  SymExpr& operator*=(const SymExpr& y) { return *this = *this * y; }

  SymExpr scaled(const RationalFunction& f) const {
    SymExpr r;
    for (const auto& [m, c] : terms_) r.add(m, c * f);
    return r;
  }

  SymExpr pow(unsigned n) const {
    SymExpr r(1), base = *this;
    while (n) {
      if (n & 1U) r *= base;
      n >>= 1U;
      if (n) base *= base;
    }
    return r;
  }

  friend bool operator==(const SymExpr& x, const SymExpr& y) {
    if (x.terms_.size() != y.terms_.size()) return false;
    for (auto i = x.terms_.begin(), j = y.terms_.begin(); i != x.terms_.end(); ++i, ++j)
      if (i->first != j->first || !(i->second == j->second)) return false;
    return true;
  }

  // Free variables: coefficient variables, atom arguments and parameters.
  std::set<Var> variables() const {
    std::set<Var> out;
    for (const auto& [m, c] : terms_) {
      for (Var v : c.numerator().variables()) out.insert(v);
      for (Var v : c.denominator().variables()) out.insert(v);
      for (const auto& [x, p] : m.factors()) {
        out.insert(x.var);
        out.insert(x.params.begin(), x.params.end());
      }
    }
    return out;
  }

  bool is_normalized() const {
    for (const auto& [m, c] : terms_)
      for (const auto& [x, p] : m.factors())
        if (x.shift != 0) return false;
    return true;
  }

  // Simultaneous renaming v -> w + offset. Atom arguments absorb the offset
  // into their shift; an atom parameter may only be renamed (offset 0).
  SymExpr renamed(const std::map<Var, std::pair<Var, int>>& map) const {
    std::map<Var, std::pair<Var, Rational>> images;
    for (const auto& [v, img] : map) images.emplace(v, std::pair{img.first, Rational(img.second)});
    SymExpr r;
    for (const auto& [m, c] : terms_) {
      AtomMonomial nm;
      for (auto [x, p] : m.factors()) {
        if (auto it = map.find(x.var); it != map.end()) {
          x.var = it->second.first;
          x.shift += it->second.second;
        }
        for (Var& q : x.params) {
          auto it = map.find(q);
          if (it == map.end()) continue;
          if (it->second.second != 0) throw DomainError("cannot shift the parameter '" + q.name() + "' of an atom");
          q = it->second.first;
        }
        nm = nm * AtomMonomial(x, p);
      }
      r.add(nm, c.translated(images));
    }
    return r;
  }

  // e(v -> v + offset) without normalization.
  SymExpr shifted(Var v, int offset) const {
    if (offset == 0) return *this;
    return renamed({{v, {v, offset}}});
  }

  std::string to_string() const;

private:
  Terms terms_;
};

// atom(v) = sum_{i=1}^{v} summand(i); the summand is written in vars::i and
// the formal parameters.
struct SumAtom {
  std::string name;
  std::vector<Var> params;
  SymExpr summand;
};

// Process-wide atom table. Atoms are declared during setup and never removed;
// a summand can only mention atoms declared before it, so the tower is
// acyclic by construction.
class AtomRegistry {
public:
  static AtomRegistry& instance() {
    static AtomRegistry r;
    return r;
  }

  std::optional<std::uint32_t> find(const std::string& name) const {
    std::lock_guard lock(m_);
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  const SumAtom& get(std::uint32_t id) const {
    std::lock_guard lock(m_);
    if (id >= atoms_.size()) throw DomainError("unknown atom id " + std::to_string(id));
    return atoms_[id];
  }

  std::uint32_t size() const {
    std::lock_guard lock(m_);
    return static_cast<std::uint32_t>(atoms_.size());
  }

  // Redeclaring an identical definition returns the existing handle.
  std::uint32_t declare(SumAtom def);

private:
  AtomRegistry();

  std::uint32_t insert(SumAtom def) {
    std::lock_guard lock(m_);
    atoms_.push_back(std::move(def));
    const auto id = static_cast<std::uint32_t>(atoms_.size() - 1);
    by_name_.emplace(atoms_.back().name, id);
    return id;
  }

  mutable std::recursive_mutex m_;
  std::deque<SumAtom> atoms_;
  std::map<std::string, std::uint32_t> by_name_;
};

inline const std::string& atom_name(std::uint32_t id) { return AtomRegistry::instance().get(id).name; }

inline std::optional<std::uint32_t> find_atom(const std::string& name) { return AtomRegistry::instance().find(name); }

inline std::uint32_t atom_id(const std::string& name) {
  auto id = find_atom(name);
  if (!id) throw DomainError("unknown atom '" + name + "'");
  return *id;
}

inline SymExpr atom_expr(const std::string& name, Var v, int shift = 0, std::vector<Var> params = {}) {
  const std::uint32_t id = atom_id(name);
  if (params.size() != AtomRegistry::instance().get(id).params.size())
    throw DomainError("atom '" + name + "' expects " + std::to_string(AtomRegistry::instance().get(id).params.size()) + " parameter(s)");
  return SymExpr::atom(AtomInstance{id, v, shift, std::move(params)});
}

inline std::string to_string(const AtomInstance& x) {
  std::string s = atom_name(x.atom) + "(" + x.var.name();
  if (x.shift > 0) s += "+" + std::to_string(x.shift);
  if (x.shift < 0) s += std::to_string(x.shift);
  for (std::size_t t = 0; t < x.params.size(); ++t) s += (t == 0 ? ";" : ",") + x.params[t].name();
  return s + ")";
}

inline std::string to_string(const AtomMonomial& m) {
  std::string s;
  for (const auto& [x, p] : m.factors()) {
    if (!s.empty()) s += "*";
    s += to_string(x);
    if (p > 1) s += "^" + std::to_string(p);
  }
  return s;
}

// Output re-parses to the same expression.
inline std::string SymExpr::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    std::string t;
    if (m.is_one()) {
      t = c.is_constant() ? nines::to_string(c.constant_value()) : "(" + c.to_string() + ")";
    } else if (c.is_constant() && c.constant_value() == 1) {
      t = nines::to_string(m);
    } else if (c.is_constant() && c.constant_value() == -1) {
      t = "-" + nines::to_string(m);
    } else if (c.is_constant()) {
      t = nines::to_string(c.constant_value()) + "*" + nines::to_string(m);
    } else {
      t = "(" + c.to_string() + ")*" + nines::to_string(m);
    }
    if (out.empty())
      out = t;
    else if (t.front() == '-')
      out += " - " + t.substr(1);
    else
      out += " + " + t;
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const SymExpr& e) { return os << e.to_string(); }

namespace detail {

// Summand of x's atom with the actual parameters, still in the bound index.
inline SymExpr summand_of(const AtomInstance& x) {
  const SumAtom& def = AtomRegistry::instance().get(x.atom);
  std::map<Var, std::pair<Var, int>> map;
  for (std::size_t t = 0; t < def.params.size(); ++t) map.emplace(def.params[t], std::pair{x.params[t], 0});
  return map.empty() ? def.summand : def.summand.renamed(map);
}

// Summand of x's atom at index x.var + offset, with actual parameters.
inline SymExpr summand_at(const AtomInstance& x, int offset) {
  const SumAtom& def = AtomRegistry::instance().get(x.atom);
  std::map<Var, std::pair<Var, int>> map{{vars::i, {x.var, offset}}};
  for (std::size_t t = 0; t < def.params.size(); ++t) map.emplace(def.params[t], std::pair{x.params[t], 0});
  return def.summand.renamed(map);
}

SymExpr normalize_impl(const SymExpr& e);

// Normal form of a single instance:
//   atom(v+s) = atom(v) + sum_{t=1}^{s} summand(v+t)        s > 0
//   atom(v+s) = atom(v) - sum_{t=s+1}^{0} summand(v+t)      s < 0
inline SymExpr expand_instance(const AtomInstance& x) {
  AtomInstance base = x;
  base.shift = 0;
  SymExpr r = SymExpr::atom(base);
  if (x.shift == 0) return r;

  static std::mutex m;
  static std::map<AtomInstance, SymExpr> cache;
  {
    std::lock_guard lock(m);
    if (auto it = cache.find(x); it != cache.end()) return it->second;
  }
  if (x.shift > 0)
    for (int t = 1; t <= x.shift; ++t) r += normalize_impl(summand_at(base, t));
  else
    for (int t = x.shift + 1; t <= 0; ++t) r -= normalize_impl(summand_at(base, t));
  std::lock_guard lock(m);
  cache.emplace(x, r);
  return r;
}

inline SymExpr normalize_impl(const SymExpr& e) {
  if (e.is_normalized()) return e;
  SymExpr r;
  for (const auto& [m, c] : e.terms()) {
    SymExpr prod(c);
    for (const auto& [x, p] : m.factors()) prod *= expand_instance(x).pow(p);
    r += prod;
  }
  return r;
}

}  // namespace detail

// Canonical form: every atom shift rewritten to 0, like monomials merged,
// zero coefficients dropped. Terminates because each rewrite only introduces
// summands of strictly earlier atoms.
inline SymExpr normalize(const SymExpr& e) { return detail::normalize_impl(e); }

inline AtomRegistry::AtomRegistry() {
  using vars::i;
  const Polynomial pi = Polynomial::variable(i);
  auto direct = [&](const std::string& name, std::vector<Var> params, SymExpr summand) {
    insert(SumAtom{name, std::move(params), std::move(summand)});
  };
  direct("H", {}, RationalFunction(Polynomial(1), pi));
  for (unsigned r = 2; r <= 9; ++r) direct("H" + std::to_string(r), {}, RationalFunction(Polynomial(1), pi.pow(r)));
  // T1(k;a) = sum_{i<=k} 1/(a+i),  T2(k;a) = sum_{i<=k} T1(i;a)/i.
  direct("T1", {vars::a}, RationalFunction(Polynomial(1), pi + Polynomial::variable(vars::a)));
  const AtomInstance t1{by_name_.at("T1"), i, 0, {vars::a}};
  direct("T2", {vars::a}, SymExpr::atom(t1).scaled(RationalFunction(Polynomial(1), pi)));
}

inline std::uint32_t AtomRegistry::declare(SumAtom def) {
  if (def.name.empty() || !std::isalpha(static_cast<unsigned char>(def.name[0])))
    throw DomainError("invalid atom name '" + def.name + "'");
  for (char ch : def.name)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') throw DomainError("invalid atom name '" + def.name + "'");
  std::set<Var> allowed{vars::i};
  for (Var p : def.params) {
    if (p == vars::i) throw DomainError("atom parameter may not be the bound index i");
    if (!allowed.insert(p).second) throw DomainError("repeated atom parameter '" + p.name() + "'");
  }
  for (Var v : def.summand.variables())
    if (!allowed.count(v)) throw DomainError("summand of atom '" + def.name + "' mentions free variable '" + v.name() + "'");
  std::lock_guard lock(m_);
  const auto next = static_cast<std::uint32_t>(atoms_.size());
  for (const auto& [m, c] : def.summand.terms())
    for (const auto& [x, p] : m.factors())
      if (x.atom >= next) throw DomainError("cyclic atom definition for '" + def.name + "'");
  def.summand = normalize(def.summand);
  if (auto it = by_name_.find(def.name); it != by_name_.end()) {
    const SumAtom& old = atoms_[it->second];
    if (old.params == def.params && old.summand == def.summand) return it->second;
    throw DomainError("atom '" + def.name + "' is already declared with a different definition");
  }
  return insert(std::move(def));
}

inline std::uint32_t declare_atom(SumAtom def) { return AtomRegistry::instance().declare(std::move(def)); }

// Substitutes the integer n for v. Atoms with argument v become finite sums;
// parameters cannot take values symbolically.
inline SymExpr substitute_value(const SymExpr& e, Var v, long n) {
  const std::map<Var, Polynomial> images{{v, Polynomial(Rational(n))}};
  SymExpr r;
  for (const auto& [m, c] : e.terms()) {
    SymExpr prod(c.substitute(images));
    for (const auto& [x, p] : m.factors()) {
      if (std::find(x.params.begin(), x.params.end(), v) != x.params.end())
        throw DomainError("cannot substitute a value for the atom parameter '" + v.name() + "'");
      if (x.var != v) {
        prod *= SymExpr::atom(x).pow(p);
        continue;
      }
      const long upper = n + x.shift;
      if (upper < 0) throw DomainError(to_string(x) + " evaluated at negative upper limit " + std::to_string(upper));
      const SymExpr summand = detail::summand_of(x);
      SymExpr value;
      for (long t = 1; t <= upper; ++t) value += substitute_value(summand, vars::i, t);
      prod *= value.pow(p);
    }
    r += prod;
  }
  return r;
}

// Exact evaluation by direct summation. Prefix sums of every atom are cached
// per parameter tuple, so evaluating a grid with one evaluator is cheap.
class BruteEvaluator {
public:
  Rational operator()(const SymExpr& e, const std::map<Var, Rational>& point) { return eval(e, point); }

  Rational eval(const SymExpr& e, const std::map<Var, Rational>& point) {
    Rational total = 0;
    for (const auto& [m, c] : e.terms()) {
      Rational t = c.evaluate(point);
      for (const auto& [x, p] : m.factors()) {
        if (t == 0) break;
        t *= rat_pow(atom_value(x, point), p);
      }
      total += t;
    }
    return total;
  }

private:
  static Rational lookup(const std::map<Var, Rational>& point, Var v) {
    auto it = point.find(v);
    if (it == point.end()) throw DomainError("no value for variable '" + v.name() + "'");
    return it->second;
  }

  Rational atom_value(const AtomInstance& x, const std::map<Var, Rational>& point) {
    const Rational upper = lookup(point, x.var) + x.shift;
    if (denominator_of(upper) != 1 || upper < 0)
      throw DomainError(to_string(x) + " needs a non-negative integer upper limit, got " + nines::to_string(upper));
    const long n = numerator_of(upper).convert_to<long>();
    std::vector<Rational> params;
    for (Var q : x.params) params.push_back(lookup(point, q));
    auto& prefix = cache_[{x.atom, params}];
    if (prefix.empty()) prefix.push_back(0);
    if (static_cast<long>(prefix.size()) <= n) {
      const SumAtom& def = AtomRegistry::instance().get(x.atom);
      std::map<Var, Rational> inner;
      for (std::size_t t = 0; t < def.params.size(); ++t) inner[def.params[t]] = params[t];
      for (long t = static_cast<long>(prefix.size()); t <= n; ++t) {
        inner[vars::i] = t;
        const Rational s = eval(def.summand, inner);
        prefix.push_back(prefix.back() + s);
      }
    }
    return prefix[n];
  }

  std::map<std::pair<std::uint32_t, std::vector<Rational>>, std::vector<Rational>> cache_;
};

inline Rational brute_eval(const SymExpr& e, const std::map<Var, long>& assignment) {
  std::map<Var, Rational> point;
  for (const auto& [v, n] : assignment) point.emplace(v, Rational(n));
  return BruteEvaluator{}.eval(e, point);
}

}  // namespace nines
