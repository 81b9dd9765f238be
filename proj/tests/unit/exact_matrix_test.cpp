#include "nines/exact_matrix.hpp"

#include <gtest/gtest.h>

#include <random>

namespace nines {
namespace {

void expect_verified(const ExactMatrix& m, const std::vector<Rational>& b, const SolveResult& res) {
  EXPECT_EQ(m.multiply(res.solution), b);
  const std::vector<Rational> zero(m.rows(), Rational(0));
  for (const auto& n : res.nullspace) EXPECT_EQ(m.multiply(n), zero);
}

TEST(ExactSolveTest, Identity) {
  const ExactMatrix m{{1, 0}, {0, 1}};
  const std::vector<Rational> b{Rational(1, 2), Rational(-3)};
  const auto res = exact_solve(m, b);
  ASSERT_EQ(res.kind, SolveResult::Kind::unique);
  EXPECT_EQ(res.solution, b);
}

TEST(ExactSolveTest, Underdetermined) {
  const ExactMatrix m{{1, 1}, {1, 1}};
  const std::vector<Rational> b{2, 2};
  const auto res = exact_solve(m, b);
  ASSERT_EQ(res.kind, SolveResult::Kind::underdetermined);
  ASSERT_EQ(res.nullspace.size(), 1u);
  EXPECT_EQ(res.nullspace[0], (std::vector<Rational>{-1, 1}));
  expect_verified(m, b, res);
}

TEST(ExactSolveTest, Inconsistent) {
  const ExactMatrix m{{1, 1}, {1, 1}};
  EXPECT_EQ(exact_solve(m, std::vector<Rational>{2, 3}).kind, SolveResult::Kind::inconsistent);
}

TEST(ExactSolveTest, DimensionMismatch) {
  const ExactMatrix m{{1, 1}};
  EXPECT_THROW(exact_solve(m, std::vector<Rational>{1, 2}), DomainError);
}

TEST(ExactSolveTest, RandomSystemsVerifyBySubstitution) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dim(1, 6), val(-5, 5), sparse(0, 2);
  for (int t = 0; t < 200; ++t) {
    const std::size_t r = dim(rng), c = dim(rng);
    ExactMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = sparse(rng) ? Rational(val(rng)) : Rational(0);
    // Consistent by construction: b = m * x0.
    std::vector<Rational> x0(c);
    for (auto& x : x0) x = Rational(val(rng), 1 + sparse(rng));
    const auto b = m.multiply(x0);
    const auto res = exact_solve(m, b);
    ASSERT_NE(res.kind, SolveResult::Kind::inconsistent);
    expect_verified(m, b, res);
  }
}

TEST(RrefTest, RespectsColumnOrder) {
  ExactMatrix m{{1, 1, 0}, {0, 1, 1}};
  const std::vector<std::size_t> order{2, 1};
  const auto piv = rref(m, order);
  EXPECT_EQ(piv, (std::vector<std::size_t>{2, 1}));
}

}  // namespace
}  // namespace nines
