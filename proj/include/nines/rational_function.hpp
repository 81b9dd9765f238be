#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>

#include "nines/polynomial.hpp"

namespace nines {

// Quotient of multivariate polynomials over Q in canonical form: numerator and
// denominator coprime, denominator an integer polynomial with content 1 and
// positive leading coefficient. Zero is 0/1. Two rational functions that are
// equal as functions have identical representations.
class RationalFunction {
public:
  RationalFunction() : den_(1) {}
  RationalFunction(const Rational& c) : num_(c), den_(1) {}      // NOLINT(google-explicit-constructor)
  RationalFunction(long c) : RationalFunction(Rational(c)) {}    // NOLINT(google-explicit-constructor)
  RationalFunction(int c) : RationalFunction(Rational(c)) {}     // NOLINT(google-explicit-constructor)
  RationalFunction(Polynomial p) : num_(std::move(p)), den_(1) {}  // NOLINT(google-explicit-constructor)

  RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) { canonicalize(); }

  static RationalFunction variable(Var v) { return RationalFunction(Polynomial::variable(v)); }

  const Polynomial& numerator() const noexcept { return num_; }
  const Polynomial& denominator() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  Rational constant_value() const { return num_.constant_value() / den_.constant_value(); }

  RationalFunction operator-() const {
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend RationalFunction operator+(const RationalFunction& x, const RationalFunction& y) {
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    if (x.den_ == y.den_) return RationalFunction(x.num_ + y.num_, x.den_);
    if (x.den_.is_constant() && y.den_.is_constant())
      return RationalFunction(x.num_.scaled(Rational(1) / x.den_.constant_value()) +
                              y.num_.scaled(Rational(1) / y.den_.constant_value()));
    // With b = g b', d = g d': a/b + c/d = (a d' + c b') / (g b' d'), and
    // the numerator is already coprime to b' d', so only g can cancel.
    const Polynomial g = gcd(x.den_, y.den_);
    const Polynomial xd = *x.den_.divide_exact(g), yd = *y.den_.divide_exact(g);
    Polynomial num = x.num_ * yd + y.num_ * xd;
    Polynomial den = x.den_ * yd;
    if (!g.is_constant() && !num.is_zero()) {
      const Polynomial h = gcd(num, g);
      if (!h.is_constant()) {
        num = *num.divide_exact(h);
        den = *den.divide_exact(h);
      }
    }
    return reduced(std::move(num), std::move(den));
  }
  friend RationalFunction operator-(const RationalFunction& x, const RationalFunction& y) { return x + (-y); }

  friend RationalFunction operator*(const RationalFunction& x, const RationalFunction& y) {
    if (x.is_zero() || y.is_zero()) return {};
    if (x.den_.is_constant() && y.den_.is_constant()) {
      RationalFunction r;
      r.num_ = (x.num_ * y.num_).scaled(Rational(1) / (x.den_.constant_value() * y.den_.constant_value()));
      return r;
    }
    // Cross-cancel first to keep the final gcd small.
    // The cross-cancelled factors are pairwise coprime, so no final gcd.
    const Polynomial g1 = gcd(x.num_, y.den_), g2 = gcd(y.num_, x.den_);
    return reduced(*x.num_.divide_exact(g1) * *y.num_.divide_exact(g2), *x.den_.divide_exact(g2) * *y.den_.divide_exact(g1));
  }

  friend RationalFunction operator/(const RationalFunction& x, const RationalFunction& y) {
    if (y.is_zero()) throw ArithmeticError("rational function division by zero");
    return x * y.inverse();
  }

  RationalFunction inverse() const {
    if (is_zero()) throw ArithmeticError("inverse of the zero rational function");
    return RationalFunction(den_, num_);
  }

  RationalFunction pow(unsigned n) const {
    RationalFunction r;
    r.num_ = num_.pow(n);
    r.den_ = den_.pow(n);
    r.fix_sign_and_content();
    return r;
  }

  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }

  friend bool operator==(const RationalFunction& x, const RationalFunction& y) {
    return x.num_ == y.num_ && x.den_ == y.den_;
  }

  // Throws ArithmeticError when the denominator vanishes at `point`.
  Rational evaluate(const std::map<Var, Rational>& point) const {
    const Rational d = den_.evaluate(point);
    if (d == 0) throw ArithmeticError("denominator " + den_.to_string() + " vanishes at evaluation point");
    return num_.evaluate(point) / d;
  }

  RationalFunction substitute(const std::map<Var, Polynomial>& images) const {
    return RationalFunction(num_.substitute(images), den_.substitute(images));
  }
  RationalFunction substitute(Var v, const Polynomial& image) const {
    return substitute(std::map<Var, Polynomial>{{v, image}});
  }
  // Substitution by an automorphism (an injective renaming plus shifts), which
  // preserves coprimality; falls back to a full substitution otherwise.
  RationalFunction translated(const std::map<Var, std::pair<Var, Rational>>& map) const {
    std::set<Var> own = num_.variables();
    for (Var v : den_.variables()) own.insert(v);
    std::map<Var, Polynomial> images;
    std::set<Var> targets;
    bool injective = true;
    for (Var v : own) {
      auto it = map.find(v);
      const Var t = it == map.end() ? v : it->second.first;
      if (!targets.insert(t).second) injective = false;
      if (it != map.end()) images.emplace(v, Polynomial::variable(t) + Polynomial(it->second.second));
    }
    if (images.empty()) return *this;
    if (!injective) return substitute(images);
    RationalFunction r;
    r.num_ = num_.substitute(images);
    r.den_ = den_.substitute(images);
    r.fix_sign_and_content();
    return r;
  }

  RationalFunction shifted(Var v, const Rational& offset) const {
    if (offset == 0) return *this;
    RationalFunction r;
    r.num_ = num_.shifted(v, offset);
    r.den_ = den_.shifted(v, offset);
    // A shift is an automorphism: coprimality is preserved, only the
    // normalization of the leading coefficient may change.
    r.fix_sign_and_content();
    return r;
  }

  bool contains(Var v) const { return num_.contains(v) || den_.contains(v); }

  std::string to_string() const {
    if (den_ == Polynomial(1)) return num_.to_string();
    auto wrap = [](const Polynomial& p) {
      std::string s = p.to_string();
      return p.terms().size() > 1 ? "(" + s + ")" : s;
    };
    return wrap(num_) + "/" + wrap(den_);
  }

private:
  // num and den already coprime.
  static RationalFunction reduced(Polynomial num, Polynomial den) {
    RationalFunction r;
    r.num_ = std::move(num);
    r.den_ = std::move(den);
    r.fix_sign_and_content();
    return r;
  }

  void canonicalize() {
    if (den_.is_zero()) throw ArithmeticError("rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = Polynomial(1);
      return;
    }
    if (!den_.is_constant()) {
      const Polynomial g = gcd(num_, den_);
      if (!g.is_constant()) {
        num_ = *num_.divide_exact(g);
        den_ = *den_.divide_exact(g);
      }
    }
    fix_sign_and_content();
  }

  void fix_sign_and_content() {
    if (num_.is_zero()) {
      den_ = Polynomial(1);
      return;
    }
    Rational c = den_.rational_content();
    if (den_.leading_coefficient() < 0) c = -c;
    if (c != 1) {
      const Rational inv = Rational(1) / c;
      num_ = num_.scaled(inv);
      den_ = den_.scaled(inv);
    }
  }

  Polynomial num_;
  Polynomial den_;
};

inline RationalFunction ratfun_normalize(const RationalFunction& f) {
  return RationalFunction(f.numerator(), f.denominator());
}

}  // namespace nines
