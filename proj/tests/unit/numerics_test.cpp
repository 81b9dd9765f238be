#include "nines/mzv_text.hpp"
#include "nines/numerics/euler_numeric.hpp"
#include "nines/numerics/mzv_numeric.hpp"
#include "nines/numerics/truncated.hpp"
#include "nines/numerics/zeta.hpp"

#include <gtest/gtest.h>


namespace nines {
namespace {

BigFloat pi() {
  BigFloat p;
  mpfr_const_pi(p.backend().data(), MPFR_RNDN);
  return p;
}

// Published decimal expansions.
const char* const kZeta3 = "1.20205690315959428539973816151144999076498629234049888179227155534";
const char* const kZeta5 = "1.03692775514336992633136548645703416805708091950191281197419267790";

bool close(const BigFloat& x, const BigFloat& y, int digits) { return abs(BigFloat(x - y)) < pow10(-digits); }

TEST(BernoulliTest, FirstValues) {
  EXPECT_EQ(bernoulli_b2n(1), Rational(1, 6));
  EXPECT_EQ(bernoulli_b2n(2), Rational(-1, 30));
  EXPECT_EQ(bernoulli_b2n(3), Rational(1, 42));
  EXPECT_EQ(bernoulli_b2n(6), Rational(-691, 2730));
  EXPECT_EQ(bernoulli_b2n(10), Rational(-174611, 330));
}

TEST(ZetaTest, EvenValuesMatchPiPowers) {
  PrecisionScope scope(70);
  const BigFloat p = pi();
  EXPECT_TRUE(close(zeta_single(2, 60), p * p / 6, 58));
  EXPECT_TRUE(close(zeta_single(4, 60), pow(p, 4) / 90, 58));
  EXPECT_TRUE(close(zeta_single(6, 60), pow(p, 6) / 945, 58));
}

TEST(ZetaTest, OddValuesMatchPublishedDigits) {
  PrecisionScope scope(70);
  EXPECT_TRUE(close(zeta_single(3, 60), BigFloat(kZeta3), 58));
  EXPECT_TRUE(close(zeta_single(5, 60), BigFloat(kZeta5), 58));
}

TEST(ZetaTest, TwoMethodsAgree) {
  for (int s = 2; s <= 9; ++s) {
    const ZetaValue em = zeta_euler_maclaurin(s, 30);
    const ZetaValue alt = zeta_alternating(s, 30);
    PrecisionScope scope(40);
    EXPECT_TRUE(close(em.value, alt.value, 29)) << "s=" << s;
  }
}

TEST(ZetaTest, HighPrecision) {
  const ZetaValue em = zeta_euler_maclaurin(5, 500);
  const ZetaValue alt = zeta_alternating(5, 500);
  PrecisionScope scope(510);
  EXPECT_TRUE(close(em.value, alt.value, 498));
}

TEST(ZetaTest, RejectsBadArguments) {
  EXPECT_THROW(zeta_euler_maclaurin(1, 30), DomainError);
  EXPECT_THROW(zeta_single(3, 0), DomainError);
  EXPECT_THROW(zeta_alternating(1, 30), DomainError);
}

TEST(MzvNumericTest, ClassicalEvaluations) {
  PrecisionScope scope(50);
  const BigFloat p = pi();
  const BigFloat z3 = zeta_single(3, 40), z2 = zeta_single(2, 40), z5 = zeta_single(5, 40);
  EXPECT_TRUE(close(mzv_numeric(parse_mzv_index("z(2,1)"), 40), z3, 38));
  EXPECT_TRUE(close(mzv_numeric(parse_mzv_index("z(3,1)"), 40), pow(p, 4) / 360, 38));
  EXPECT_TRUE(close(mzv_numeric(parse_mzv_index("z(2,2)"), 40), pow(p, 4) / 120, 38));
  EXPECT_TRUE(close(mzv_numeric(parse_mzv_index("z(2,1,1)"), 40), pow(p, 4) / 90, 38));
  // Euler: z(4,1) = 2 z(5) - z(2) z(3).
  EXPECT_TRUE(close(mzv_numeric(parse_mzv_index("z(4,1)"), 40), 2 * z5 - z2 * z3, 38));
  EXPECT_TRUE(close(mzv_numeric(parse_mzv_index("z(3,2)"), 40), 3 * z2 * z3 - BigFloat(11) / 2 * z5, 38));
}

TEST(MzvNumericTest, DualityHoldsNumerically) {
  PrecisionScope scope(40);
  for (int w = 3; w <= 7; ++w)
    for (const auto& x : enumerate_indices(w))
      EXPECT_TRUE(close(mzv_numeric(x, 30), mzv_numeric(dual(x), 30), 28)) << x;
}

TEST(MzvNumericTest, Limits) {
  EXPECT_THROW(mzv_numeric(parse_mzv_index("z(13)"), 30), DomainError);
  EXPECT_THROW(mzv_numeric(parse_mzv_index("z(2,1)"), 101), DomainError);
}

TEST(MzvNumericTest, EvaluatesExpressions) {
  PrecisionScope scope(40);
  const BigFloat lhs = evaluate(parse_zeta_expression("z(2)*z(3)"), 30);
  const BigFloat rhs = evaluate(parse_zeta_expression("z(2,3) + z(3,2) + z(5)"), 30);
  EXPECT_TRUE(close(lhs, rhs, 28));
}

TEST(EulerNumericTest, ClosedForms) {
  PrecisionScope scope(40);
  const BigFloat p = pi();
  // Euler: S_{1;2} = 2 zeta(3), S_{1;3} = pi^4/72.
  EXPECT_TRUE(close(euler_numeric(parse_euler_index("S(1;2)"), 30), 2 * BigFloat(kZeta3), 28));
  EXPECT_TRUE(close(euler_numeric(parse_euler_index("S(1;3)"), 30), pow(p, 4) / 72, 28));
  EXPECT_TRUE(close(euler_numeric(parse_euler_index("S(;2)"), 30), p * p / 6, 28));
}

TEST(EulerNumericTest, AgreesWithMzvExpansion) {
  PrecisionScope scope(40);
  for (const char* s : {"S(1;2)", "S(1,1;3)", "S(1,1,1;2)", "S(1,2;2)", "S(2,3;4)", "S(1,1,1;6)"}) {
    const EulerIndex e = parse_euler_index(s);
    EXPECT_TRUE(close(euler_numeric(e, 30), evaluate(euler_to_mzv(e), 30), 28)) << s;
  }
}

// Direct double sum in Q, written independently of the library.
Rational s_oracle(int a, int b) {
  Rational total = 0;
  for (int k = 1; k <= b; ++k) {
    Rational hk1 = 0;
    for (int i = 1; i <= k + 1; ++i) hk1 += Rational(1, i);
    for (int j = 1; j <= a; ++j) {
      Rational hj = 0;
      for (int i = 1; i <= j; ++i) hj += Rational(1, i);
      total += (hk1 - 1) / (k * (k + 1)) * hj / (j * (j + k));
    }
  }
  return total;
}

TEST(TruncatedTest, SmallValues) {
  EXPECT_EQ(*eval_S_truncated(1, 1).exact, Rational(1, 8));
  EXPECT_EQ(*eval_S_prime(1, 1).exact, Rational(1, 4));
  for (auto [a, b] : {std::pair{2, 3}, {5, 4}, {9, 9}}) EXPECT_EQ(*eval_S_truncated(a, b).exact, s_oracle(a, b));
}

TEST(TruncatedTest, FloatModeMatchesExactAtTheBoundary) {
  EXPECT_EQ(eval_S_truncated(200, 200).mode, "exact");
  const auto flt = eval_S_truncated(201, 200);
  EXPECT_EQ(flt.mode, "float");
  PrecisionScope scope(40);
  const BigFloat exact = to_bigfloat(detail::s_truncated_exact(201, 200));
  EXPECT_LT(abs(BigFloat(flt.value - exact)), flt.error_estimate);
  EXPECT_LT(abs(BigFloat(flt.value - exact)), BigFloat("1e-12"));
}

TEST(TruncatedTest, ComponentsSumToSPrime) {
  const ABC<Rational> c1 = eval_ABC_as<Rational>(1, 1);
  EXPECT_EQ(c1.A, Rational(5, 4));
  EXPECT_EQ(c1.B, Rational(-1));
  EXPECT_EQ(c1.C, Rational(0));
  for (auto [a, b] : {std::pair{7, 9}, {3, 20}, {15, 2}})
    EXPECT_EQ(eval_ABC_as<Rational>(a, b).sum(), *eval_S_prime(a, b).exact) << a << "," << b;
}

TEST(TruncatedTest, Convergence) {
  const BigFloat rhs = rhs_theorem1(40);
  const auto s3000 = eval_S_truncated(3000, 3000);
  const auto s1000 = eval_S_truncated(1000, 1000);
  EXPECT_GT(s3000.value, BigFloat("0.97"));
  EXPECT_LT(s3000.value, BigFloat("0.9993"));
  EXPECT_GT(s3000.value, s1000.value);
  const auto sp = eval_S_prime(10000, 10000);
  EXPECT_LT(abs(BigFloat(sp.value - rhs)), BigFloat("1e-2"));
  EXPECT_LT(abs(BigFloat(sp.value - rhs)), 3 * sp.error_estimate);
}

TEST(TruncatedTest, BracketContainsLimit) {
  const Interval iv = bracket_S(3000, 3000);
  const BigFloat rhs = rhs_theorem1(30);
  EXPECT_TRUE(iv.contains(rhs));
  EXPECT_THROW(bracket_S(5, 5), DomainError);
}

TEST(TruncatedTest, LimitTermsShrink) {
  const auto rows = limit_terms_report({100, 10000, 1000000}, 10);
  ASSERT_EQ(rows.size(), 3U);
  for (std::size_t t = 1; t < rows.size(); ++t) {
    EXPECT_LT(rows[t].inv_k2_tail, rows[t - 1].inv_k2_tail);
    EXPECT_LT(rows[t].harmonic_tail, rows[t - 1].harmonic_tail);
    EXPECT_LT(rows[t].nested_tail, rows[t - 1].nested_tail);
  }
  EXPECT_LT(rows.back().harmonic_tail, BigFloat("1e-4"));
  EXPECT_THROW(limit_terms_report({100, 50}, 10), DomainError);
}

TEST(TruncatedTest, RightSide) {
  EXPECT_EQ(to_decimal_truncated(rhs_theorem1(50), 20), "0.99922283776383000876");
  EXPECT_EQ(to_decimal_truncated(rhs_theorem1(30), 6), "0.999222");
  EXPECT_EQ(to_decimal(rhs_theorem1(30), 6), "0.999223");
}

}  // namespace
}  // namespace nines
