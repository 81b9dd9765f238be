#pragma once

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "nines/mzv.hpp"

namespace nines {

// prefactor * zeta(mzv): a product of single zeta values (treated as scalar
// parameters) times at most one MZV of depth >= 2.
struct ZetaTerm {
  std::optional<MzvIndex> mzv;
  ZetaMonomial prefactor;

  int weight() const { return prefactor.weight() + (mzv ? mzv->weight() : 0); }
  auto operator<=>(const ZetaTerm&) const = default;

  std::string to_string() const {
    if (!mzv) return prefactor.to_string();
    if (prefactor.is_one()) return mzv->to_string();
    return prefactor.to_string() + "*" + mzv->to_string();
  }
};

// Display order: total weight descending, MZV-carrying terms first, then MZV
// descending, then prefactor in monomial display order.
struct ZetaTermDisplayOrder {
  bool operator()(const ZetaTerm& x, const ZetaTerm& y) const {
    if (x.weight() != y.weight()) return x.weight() > y.weight();
    if (x.mzv.has_value() != y.mzv.has_value()) return x.mzv.has_value();
    if (x.mzv != y.mzv) return *x.mzv > *y.mzv;
    return MonomialDisplayOrder{}(x.prefactor, y.prefactor);
  }
};

// Rational combination of ZetaTerms. Depth-1 MZVs are always folded into the
// prefactor, so zeta(3) and z(3) have one representation. This is the
// parameterized space in which mixed-weight inputs such as
// (zeta(2) - 1)(zeta(3) + zeta(2,1)) live without being expanded.
class ZetaExpression {
public:
  using Terms = std::map<ZetaTerm, Rational, ZetaTermDisplayOrder>;

  ZetaExpression() = default;
  explicit ZetaExpression(const Rational& c) { add(ZetaMonomial{}, std::nullopt, c); }
  ZetaExpression(const MzvIndex& x) { add(ZetaMonomial{}, x, 1); }  // NOLINT(google-explicit-constructor)
  ZetaExpression(const MzvCombination& c) {                          // NOLINT(google-explicit-constructor)
    add(ZetaMonomial{}, std::nullopt, c.constant());
    for (const auto& [x, v] : c.terms()) add(ZetaMonomial{}, x, v);
  }
  ZetaExpression(const ZetaPolynomial& p) {  // NOLINT(google-explicit-constructor)
    for (const auto& [m, c] : p.terms()) add(m, std::nullopt, c);
  }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const ZetaMonomial& prefactor, const std::optional<MzvIndex>& mzv, const Rational& c) {
    if (c == 0) return;
    ZetaTerm t;
    if (mzv && mzv->depth() == 1) {
      t.prefactor = prefactor * ZetaMonomial{mzv->parts()[0]};
    } else {
      t.prefactor = prefactor;
      t.mzv = mzv;
    }
    auto [it, inserted] = terms_.try_emplace(std::move(t), c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  void add(const ZetaTerm& t, const Rational& c) { add(t.prefactor, t.mzv, c); }

  ZetaExpression& operator+=(const ZetaExpression& o) {
    for (const auto& [t, c] : o.terms_) add(t, c);
    return *this;
  }
  ZetaExpression& operator-=(const ZetaExpression& o) {
    for (const auto& [t, c] : o.terms_) add(t, -c);
    return *this;
  }
  friend ZetaExpression operator+(ZetaExpression x, const ZetaExpression& y) { return x += y; }
  friend ZetaExpression operator-(ZetaExpression x, const ZetaExpression& y) { return x -= y; }

  // Prefactors multiply as parameters; two MZV factors are stuffled.
  friend ZetaExpression operator*(const ZetaExpression& x, const ZetaExpression& y) {
    ZetaExpression r;
    for (const auto& [tx, cx] : x.terms_) {
      for (const auto& [ty, cy] : y.terms_) {
        const ZetaMonomial pre = tx.prefactor * ty.prefactor;
        if (tx.mzv && ty.mzv) {
          const MzvCombination st = stuffle(*tx.mzv, *ty.mzv);
          for (const auto& [z, c] : st.terms()) r.add(pre, z, cx * cy * c);
        } else {
          r.add(pre, tx.mzv ? tx.mzv : ty.mzv, cx * cy);
        }
      }
    }
    return r;
  }

  ZetaExpression scaled(const Rational& s) const {
    ZetaExpression r;
    for (const auto& [t, c] : terms_) r.add(t, c * s);
    return r;
  }

  friend bool operator==(const ZetaExpression&, const ZetaExpression&) = default;

  bool is_polynomial() const {
    for (const auto& [t, c] : terms_)
      if (t.mzv) return false;
    return true;
  }

  ZetaPolynomial polynomial_part() const {
    ZetaPolynomial p;
    for (const auto& [t, c] : terms_)
      if (!t.mzv) p.add(t.prefactor, c);
    return p;
  }

  // Terms that still carry an MZV of depth >= 2.
  ZetaExpression mzv_part() const {
    ZetaExpression r;
    for (const auto& [t, c] : terms_)
      if (t.mzv) r.add(t, c);
    return r;
  }

  // Expands every prefactor by stuffle, giving a plain MZV combination.
  MzvCombination full_expansion() const {
    MzvCombination out;
    for (const auto& [t, c] : terms_) {
      MzvCombination term = expand_monomial(t.prefactor);
      if (t.mzv) term = stuffle(term, MzvCombination(*t.mzv));
      out += term.scaled(c);
    }
    return out;
  }

  std::string to_string() const {
    std::string out;
    for (const auto& [t, c] : terms_) detail::append_signed_term(out, c, t.to_string());
    return out.empty() ? "0" : out;
  }

private:
  Terms terms_;
};

inline std::ostream& operator<<(std::ostream& os, const ZetaExpression& x) { return os << x.to_string(); }

}  // namespace nines
