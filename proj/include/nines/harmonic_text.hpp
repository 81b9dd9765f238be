#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nines/error.hpp"
#include "nines/harmonic.hpp"

namespace nines {

namespace detail {

// Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' integer)?
//   primary := integer | '(' expr ')' | name | name '(' (integer | var (('+'|'-') integer)?) (';' var (',' var)*)? ')'
// A name followed by '(' is an atom; any other name is a variable. Division
// is only allowed by atom-free expressions.
class SymParser {
public:
  SymParser(std::string_view text, std::optional<std::string> defining)
      : text_(text), defining_(std::move(defining)) {}

  SymExpr parse() {
    SymExpr e = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, std::string(text_), pos_); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  SymExpr expr() {
    SymExpr e = term();
    for (;;) {
      if (accept('+'))
        e += term();
      else if (accept('-'))
        e -= term();
      else
        return e;
    }
  }

  SymExpr term() {
    SymExpr e = unary();
    for (;;) {
      if (accept('*')) {
        e *= unary();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        const SymExpr d = unary();
        if (d.is_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        if (d.terms().size() != 1 || !d.terms().begin()->first.is_one()) {
          pos_ = at;
          fail("division by an expression containing atoms");
        }
        e = e.scaled(d.terms().begin()->second.inverse());
      } else {
        return e;
      }
    }
  }

  SymExpr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  SymExpr power() {
    SymExpr base = primary();
    if (accept('^')) return base.pow(static_cast<unsigned>(integer()));
    return base;
  }

  long integer() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    if (pos_ - start > 9) fail("integer literal too long");
    return std::stol(std::string(text_.substr(start, pos_ - start)));
  }

  std::string name() {
    skip();
    const std::size_t start = pos_;
    if (pos_ >= text_.size() || !std::isalpha(static_cast<unsigned char>(text_[pos_]))) fail("expected a name");
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  SymExpr primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return SymExpr(Rational(std::string(text_.substr(start, pos_ - start))));
    }
    if (accept('(')) {
      SymExpr e = expr();
      expect(')');
      return e;
    }
    const std::size_t at = pos_;
    const std::string id = name();
    skip();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      return atom_call(id, at);
    }
    return SymExpr::variable(Var::named(id));
  }

  SymExpr atom_call(const std::string& id, std::size_t at) {
    if (defining_ && id == *defining_) {
      pos_ = at;
      throw DomainError("cyclic atom definition: '" + id + "' refers to itself");
    }
    const auto handle = find_atom(id);
    if (!handle) {
      pos_ = at;
      fail("unknown atom '" + id + "'");
    }
    AtomInstance x;
    x.atom = *handle;
    skip();
    std::optional<long> literal;
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      literal = integer();
    } else {
      x.var = Var::named(name());
      if (accept('+'))
        x.shift = static_cast<int>(integer());
      else if (accept('-'))
        x.shift = -static_cast<int>(integer());
    }
    if (accept(';')) {
      do x.params.push_back(Var::named(name()));
      while (accept(','));
    }
    expect(')');
    const std::size_t want = AtomRegistry::instance().get(x.atom).params.size();
    if (x.params.size() != want) {
      pos_ = at;
      fail("atom '" + id + "' expects " + std::to_string(want) + " parameter(s)");
    }
    if (!literal) return SymExpr::atom(x);
    // A literal argument expands to the finite sum.
    x.var = vars::i;
    return substitute_value(SymExpr::atom(x), vars::i, *literal);
  }

  std::string_view text_;
  std::optional<std::string> defining_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline SymExpr parse_sym(std::string_view text) { return detail::SymParser(text, std::nullopt).parse(); }

// Declares name(v; params) = sum_{i=1}^{v} summand, the summand written in i.
inline std::uint32_t declare_atom(const std::string& name, const std::vector<std::string>& params, std::string_view summand) {
  SumAtom def;
  def.name = name;
  for (const auto& p : params) def.params.push_back(Var::named(p));
  def.summand = detail::SymParser(summand, name).parse();
  return declare_atom(std::move(def));
}

}  // namespace nines
