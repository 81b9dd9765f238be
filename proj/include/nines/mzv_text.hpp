#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "nines/zeta_expr.hpp"

namespace nines {

// Text syntax shared by the CLI and fixtures:
//   z(3,2)           MZV (z(5) is the single zeta value)
//   S(1,1;3) S(;2)   Euler sums, expanded into MZVs on parse
//   -11/2            rationals
//   expressions with + - * / ( ); division only by rational constants.
namespace detail {

class ZetaParser {
public:
  explicit ZetaParser(std::string_view text) : s_(text) {}

  ZetaExpression parse_expression_only() {
    ZetaExpression e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

  MzvIndex parse_mzv_only() {
    skip_ws();
    auto parts = z_call();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return make_index(parts);
  }

  EulerIndex parse_euler_only() {
    skip_ws();
    EulerIndex e = s_call();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, s_, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  int integer() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    if (pos_ - start > 6) {
      pos_ = start;
      fail("integer too large");
    }
    return std::stoi(s_.substr(start, pos_ - start));
  }

  Integer big_integer() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return Integer(s_.substr(start, pos_ - start));
  }

  std::vector<int> int_list(char close) {
    std::vector<int> out;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == close) return out;
    out.push_back(integer());
    while (accept(',')) out.push_back(integer());
    return out;
  }

  std::vector<int> z_call() {
    const std::size_t start = pos_;
    if (!(accept('z') || accept('Z'))) fail("expected z(...)");
    expect('(');
    auto parts = int_list(')');
    if (parts.empty()) {
      pos_ = start;
      fail("empty MZV index");
    }
    expect(')');
    check_index(parts, start);
    return parts;
  }

  void check_index(const std::vector<int>& parts, std::size_t at) {
    for (int p : parts)
      if (p < 1) {
        pos_ = at;
        fail("MZV index parts must be positive");
      }
    if (parts.front() < 2) {
      pos_ = at;
      fail("MZV index must start with a part >= 2");
    }
  }

  static MzvIndex make_index(const std::vector<int>& parts) { return MzvIndex(parts); }

  EulerIndex s_call() {
    const std::size_t start = pos_;
    if (!accept('S')) fail("expected S(...)");
    expect('(');
    auto ps = int_list(';');
    expect(';');
    const int q = integer();
    expect(')');
    for (int p : ps)
      if (p < 1) {
        pos_ = start;
        fail("Euler sum orders must be >= 1");
      }
    if (q < 2) {
      pos_ = start;
      fail("Euler sum exponent q must be >= 2");
    }
    return EulerIndex(ps, q);
  }

  ZetaExpression expr() {
    ZetaExpression acc = term();
    for (;;) {
      if (accept('+'))
        acc += term();
      else if (accept('-'))
        acc -= term();
      else
        return acc;
    }
  }

  ZetaExpression term() {
    ZetaExpression acc = factor();
    for (;;) {
      if (accept('*')) {
        acc = acc * factor();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        ZetaExpression d = factor();
        const ZetaPolynomial p = d.polynomial_part();
        if (!d.is_polynomial() || p.terms().size() != 1 || !p.terms().begin()->first.is_one()) {
          pos_ = at;
          fail("division is only allowed by a rational constant");
        }
        const Rational c = p.terms().begin()->second;
        acc = acc.scaled(Rational(1) / c);
      } else {
        return acc;
      }
    }
  }

  ZetaExpression factor() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '-') {
      ++pos_;
      return factor().scaled(-1);
    }
    if (c == '+') {
      ++pos_;
      return factor();
    }
    if (c == '(') {
      ++pos_;
      ZetaExpression e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return ZetaExpression(Rational(big_integer()));
    if (c == 'z' || c == 'Z') return ZetaExpression(make_index(z_call()));
    if (c == 'S') return ZetaExpression(euler_to_mzv(s_call()));
    fail("unexpected character");
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline ZetaExpression parse_zeta_expression(std::string_view text) {
  return detail::ZetaParser(text).parse_expression_only();
}

inline MzvIndex parse_mzv_index(std::string_view text) { return detail::ZetaParser(text).parse_mzv_only(); }

inline EulerIndex parse_euler_index(std::string_view text) { return detail::ZetaParser(text).parse_euler_only(); }

// Parses a plain MZV combination (no products of MZVs with zeta prefactors).
inline MzvCombination parse_mzv_combination(std::string_view text) {
  return parse_zeta_expression(text).full_expansion();
}

inline ZetaPolynomial parse_zeta_polynomial(std::string_view text) {
  const ZetaExpression e = parse_zeta_expression(text);
  if (!e.is_polynomial()) throw ParseError("expected a polynomial in single zeta values", std::string(text), 0);
  return e.polynomial_part();
}

}  // namespace nines
