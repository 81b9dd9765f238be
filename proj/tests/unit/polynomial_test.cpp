#include "nines/rational_function.hpp"

#include <gtest/gtest.h>

#include <random>

namespace nines {
namespace {

using vars::a;
using vars::j;
using vars::k;

Polynomial X(Var v) { return Polynomial::variable(v); }

// Test-only oracle: two rational functions agree iff their cross products
// agree at many random integer points.
bool agree_at_random_points(const RationalFunction& f, const RationalFunction& g, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-40, 40);
  int checked = 0;
  for (int attempt = 0; attempt < 200 && checked < 12; ++attempt) {
    std::map<Var, Rational> pt{{a, d(rng)}, {vars::b, d(rng)}, {j, d(rng)}, {k, d(rng)}};
    const Rational fd = f.denominator().evaluate(pt), gd = g.denominator().evaluate(pt);
    if (fd == 0 || gd == 0) continue;
    if (f.numerator().evaluate(pt) * gd != g.numerator().evaluate(pt) * fd) return false;
    ++checked;
  }
  return checked >= 12;
}

Polynomial random_poly(std::mt19937_64& rng, int max_terms = 4, int max_deg = 2) {
  std::uniform_int_distribution<int> coeff(-9, 9), deg(0, max_deg), nterms(1, max_terms), var(0, 3);
  Polynomial p;
  const int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    Exponents e;
    for (int v = 0; v < 2; ++v) e.set(Var(static_cast<std::uint32_t>(var(rng))), static_cast<std::uint32_t>(deg(rng)));
    p.add_term(e, Rational(coeff(rng)));
  }
  return p;
}

TEST(PolynomialTest, ArithmeticAndPrinting) {
  const Polynomial p = (X(k) + 1) * (X(k) + 2);
  EXPECT_EQ(p, X(k).pow(2) + X(k).scaled(3) + 2);
  EXPECT_EQ(p.to_string(), "k^2 + 3*k + 2");
  EXPECT_EQ(p.degree(k), 2u);
  EXPECT_EQ((X(a) - X(a)).is_zero(), true);
}

TEST(PolynomialTest, ShiftAndEvaluate) {
  const Polynomial p = X(k).pow(2) * X(j);
  const Polynomial q = p.shifted(k, 1);
  EXPECT_EQ(q.evaluate({{k, 2}, {j, 5}}), Rational(45));
  EXPECT_THROW(p.evaluate({{k, 2}}), DomainError);
}

TEST(PolynomialTest, ExactDivision) {
  const Polynomial f = (X(a) + X(k) + 1) * (X(j) - X(k).scaled(2));
  EXPECT_EQ(*f.divide_exact(X(j) - X(k).scaled(2)), X(a) + X(k) + 1);
  EXPECT_FALSE(f.divide_exact(X(a) + 3).has_value());
  EXPECT_THROW(f.divide_exact(Polynomial()), ArithmeticError);
}

TEST(PolynomialTest, GcdUnivariateAndMultivariate) {
  EXPECT_EQ(gcd(X(k).pow(2) - 1, X(k) - 1), X(k) - 1);
  const Polynomial common = X(a) + X(k) + 2;
  const Polynomial p = common * (X(j) + X(k)) * (X(a) - 3);
  const Polynomial q = common.pow(2) * (X(j) - 1);
  EXPECT_EQ(gcd(p, q), common);
  EXPECT_EQ(gcd(X(j), X(k)), Polynomial(1));
  EXPECT_EQ(gcd(Polynomial(), Polynomial()), Polynomial());
}

// Products of distinct linear factors: the gcd is the product of the shared
// ones, and the cofactors carry no common factor.
TEST(PolynomialTest, GcdOfFactoredProducts) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> c(-3, 3), count(0, 3);
  auto linear = [&]() {
    Polynomial f;
    while (f.total_degree() != 1) f = X(a) * c(rng) + X(j) * c(rng) + X(k) * c(rng) + Polynomial(c(rng));
    return f.primitive_integer_part();
  };
  for (int t = 0; t < 200; ++t) {
    std::vector<Polynomial> fs;
    while (fs.size() < 9) {
      const Polynomial f = linear();
      bool fresh = true;
      for (const auto& h : fs)
        if (h == f || h == -f) fresh = false;
      if (fresh) fs.push_back(f);
    }
    Polynomial shared(1), left(Rational(c(rng) == 0 ? 1 : 5)), right(1);
    const int ns = count(rng), nl = count(rng), nr = count(rng);
    for (int i = 0; i < ns; ++i) shared *= fs[i];
    for (int i = 0; i < nl; ++i) left *= fs[3 + i];
    for (int i = 0; i < nr; ++i) right *= fs[6 + i];
    if (ns > 0 && t % 3 == 0) shared *= fs[0];  // repeated factor
    const Polynomial g = gcd(shared * left, shared * right);
    EXPECT_EQ(g, shared.primitive_integer_part()) << (shared * left).to_string() << " ; " << (shared * right).to_string();
  }
}

TEST(RatFunTest, CommonFactorCancels) {
  const RationalFunction f(X(k).pow(2) - 1, X(k) - 1);
  EXPECT_EQ(f, RationalFunction(X(k) + 1));
  EXPECT_TRUE(f.is_polynomial());
}

TEST(RatFunTest, ExpansionOverOne) {
  const RationalFunction f((X(k) + 1) * (X(k) + 2), Polynomial(1));
  EXPECT_EQ(f.numerator(), X(k).pow(2) + X(k).scaled(3) + 2);
  EXPECT_EQ(f.denominator(), Polynomial(1));
}

TEST(RatFunTest, BivariateCommonFactor) {
  const Polynomial s1 = X(a) + X(k) + 1, s2 = X(a) + X(k) + 2;
  const RationalFunction f(s1 * s2, s2);
  EXPECT_EQ(f, RationalFunction(s1));
  // Oracle: evaluation of the unreduced quotient at five integer points.
  const std::map<Var, Rational> pts[] = {
      {{a, 1}, {k, 1}}, {{a, 3}, {k, 7}}, {{a, -2}, {k, 5}}, {{a, 10}, {k, 0}}, {{a, 4}, {k, -9}}};
  for (const auto& pt : pts) EXPECT_EQ(f.evaluate(pt), (s1 * s2).evaluate(pt) / s2.evaluate(pt));
}

TEST(RatFunTest, ZeroDenominatorThrows) {
  EXPECT_THROW(RationalFunction(X(k), Polynomial()), ArithmeticError);
  EXPECT_THROW(RationalFunction(X(k)) / RationalFunction(), ArithmeticError);
  EXPECT_THROW(RationalFunction(Polynomial(1), X(k)).evaluate({{k, 0}}), ArithmeticError);
}

TEST(RatFunTest, SignConventionOnDenominator) {
  const RationalFunction f(Polynomial(1), -X(k).scaled(2) - 4);
  EXPECT_EQ(f.denominator(), X(k) + 2);
  EXPECT_EQ(f.numerator(), Polynomial(Rational(-1, 2)));
}

TEST(RatFunTest, NormalizeIsIdempotentAndCancelsRandomFactors) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 150; ++t) {
    Polynomial n = random_poly(rng), d = random_poly(rng), g = random_poly(rng, 3, 1);
    if (d.is_zero() || g.is_zero()) continue;
    const RationalFunction f(n, d);
    const RationalFunction gg(g, Polynomial(1) + X(j) * X(j));
    EXPECT_EQ(ratfun_normalize(ratfun_normalize(f)), ratfun_normalize(f));
    EXPECT_EQ((f * gg) / gg, f);
    EXPECT_TRUE(agree_at_random_points(f * gg, RationalFunction(n * g, d * (Polynomial(1) + X(j) * X(j))), rng));
    const RationalFunction unreduced(n * g, d * g);
    EXPECT_EQ(unreduced, f);
    EXPECT_TRUE(agree_at_random_points(f + gg - gg, f, rng));
  }
}

TEST(RatFunTest, ShiftMatchesSubstitution) {
  const RationalFunction f(X(j) + X(k), (X(k) + X(j)) * (X(k) + X(j) + 1) * X(j));
  EXPECT_EQ(f.shifted(j, 1), f.substitute(j, X(j) + 1));
  EXPECT_EQ(f.shifted(k, Rational(-1, 2)), f.substitute(k, X(k) - Polynomial(Rational(1, 2))));
}

}  // namespace
}  // namespace nines
