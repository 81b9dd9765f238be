#include "nines/mzv.hpp"
#include "nines/mzv_text.hpp"

#include <gtest/gtest.h>

#include <random>

namespace nines {
namespace {

MzvCombination P(std::string_view s) { return parse_mzv_combination(s); }

// Oracle: a product of strictly decreasing chains of summation variables is
// decomposed by brute force over all rank assignments. Each assignment of the
// variables to ranks 1..r that is surjective and strictly respects every
// chain (and every "n >= j" constraint in `weak`) contributes one MZV whose
// parts sum the exponents sitting at each rank.
struct Chain {
  std::vector<int> exponents;  // outermost first
};

MzvCombination decompose_by_rank_assignment(const std::vector<Chain>& chains,
                                            const std::vector<std::pair<int, int>>& weak_geq = {}) {
  std::vector<std::pair<int, int>> vars;  // (chain, position)
  std::vector<int> exps;
  for (int c = 0; c < static_cast<int>(chains.size()); ++c)
    for (int p = 0; p < static_cast<int>(chains[c].exponents.size()); ++p) {
      vars.emplace_back(c, p);
      exps.push_back(chains[c].exponents[p]);
    }
  const int n = static_cast<int>(vars.size());
  MzvCombination out;
  std::vector<int> rank(n, 0);
  // rank 0 is the largest value.
  std::function<void(int)> rec = [&](int v) {
    if (v == n) {
      const int r = *std::max_element(rank.begin(), rank.end()) + 1;
      std::vector<int> parts(r, 0);
      for (int t = 0; t < n; ++t) parts[rank[t]] += exps[t];
      for (int p : parts)
        if (p == 0) return;  // not surjective
      for (int t = 0; t < n; ++t)
        for (int u = 0; u < n; ++u)
          if (vars[t].first == vars[u].first && vars[t].second + 1 == vars[u].second && !(rank[t] < rank[u])) return;
      for (auto [big, small] : weak_geq)
        if (rank[big] > rank[small]) return;
      out.add(MzvIndex(parts), 1);
      return;
    }
    for (int r = 0; r < n; ++r) {
      rank[v] = r;
      rec(v + 1);
    }
  };
  rec(0);
  return out;
}

TEST(EnumerateIndicesTest, SmallWeights) {
  EXPECT_EQ(enumerate_indices(2), (std::vector<MzvIndex>{{2}}));
  EXPECT_EQ(enumerate_indices(3), (std::vector<MzvIndex>{{3}, {2, 1}}));
  const std::vector<MzvIndex> w5{{5}, {4, 1}, {3, 2}, {2, 3}, {3, 1, 1}, {2, 2, 1}, {2, 1, 2}, {2, 1, 1, 1}};
  EXPECT_EQ(enumerate_indices(5), w5);
  EXPECT_THROW(enumerate_indices(1), DomainError);
}

TEST(EnumerateIndicesTest, CountIsPowerOfTwoAndMatchesBruteForce) {
  for (int w = 2; w <= 12; ++w) {
    const auto idx = enumerate_indices(w);
    EXPECT_EQ(idx.size(), std::size_t{1} << (w - 2)) << "weight " << w;
    std::set<MzvIndex> unique(idx.begin(), idx.end());
    EXPECT_EQ(unique.size(), idx.size());
    for (const auto& x : idx) EXPECT_EQ(x.weight(), w);
  }
  // Brute force over bit patterns: a composition of w is a choice of cut points.
  for (int w = 2; w <= 9; ++w) {
    std::set<MzvIndex> brute;
    for (unsigned mask = 0; mask < (1u << (w - 1)); ++mask) {
      std::vector<int> parts{1};
      for (int t = 0; t < w - 1; ++t) {
        if (mask & (1u << t))
          parts.push_back(1);
        else
          ++parts.back();
      }
      if (parts.front() >= 2) brute.insert(MzvIndex(parts));
    }
    const auto idx = enumerate_indices(w);
    EXPECT_EQ(brute, std::set<MzvIndex>(idx.begin(), idx.end()));
  }
}

TEST(MzvIndexTest, Invariants) {
  EXPECT_THROW(MzvIndex({1, 2}), DomainError);
  EXPECT_THROW(MzvIndex(std::vector<int>{}), DomainError);
  EXPECT_THROW(MzvIndex({3, 0}), DomainError);
  EXPECT_EQ(MzvIndex({3, 1, 1}).weight(), 5);
  EXPECT_EQ(MzvIndex({3, 1, 1}).depth(), 3);
  EXPECT_THROW(EulerIndex({1}, 1), DomainError);
  EXPECT_EQ(EulerIndex({2, 1}, 2).ps(), (std::vector<int>{1, 2}));
}

TEST(StuffleTest, ZetaTwoTimesZetaThree) { EXPECT_EQ(stuffle(MzvIndex{2}, MzvIndex{3}), P("z(2,3) + z(3,2) + z(5)")); }

TEST(StuffleTest, DepthOneProductsAgainstCaseSplit) {
  EXPECT_EQ(stuffle(MzvIndex{2}, MzvIndex{2}), P("2*z(2,2) + z(4)"));
  EXPECT_EQ(stuffle(MzvIndex{4}, MzvIndex{3}), P("z(4,3) + z(3,4) + z(7)"));
  for (auto [s, t] : {std::pair{2, 2}, {4, 3}, {2, 5}})
    EXPECT_EQ(stuffle(MzvIndex{s}, MzvIndex{t}), decompose_by_rank_assignment({{{s}}, {{t}}}));
}

TEST(StuffleTest, PropertiesOnRandomPairs) {
  const auto w3 = enumerate_indices(3), w4 = enumerate_indices(4), w5 = enumerate_indices(5);
  std::vector<MzvIndex> pool;
  for (const auto* v : {&w3, &w4, &w5}) pool.insert(pool.end(), v->begin(), v->end());
  for (const auto& x : pool) {
    for (const auto& y : pool) {
      const auto xy = stuffle(x, y);
      EXPECT_EQ(xy, stuffle(y, x));
      EXPECT_EQ(xy.uniform_weight(), x.weight() + y.weight());
      for (const auto& [z, c] : xy.terms()) EXPECT_GT(c, 0);
      if (x.depth() + y.depth() <= 5) {
        EXPECT_EQ(xy, decompose_by_rank_assignment({{x.parts()}, {y.parts()}})) << x.to_string() << y.to_string();
      }
      if (x.depth() == 1 && y.depth() == 1) {
        Rational sum = 0;
        for (const auto& [z, c] : xy.terms()) sum += c;
        EXPECT_EQ(sum, 3);
      }
    }
  }
}

TEST(ExpandMonomialTest, Examples) {
  EXPECT_EQ(expand_monomial(ZetaMonomial{}), MzvCombination(Rational(1)));
  EXPECT_EQ(expand_monomial(ZetaMonomial{2, 3}), P("z(2,3) + z(3,2) + z(5)"));
  EXPECT_EQ(expand_monomial(ZetaMonomial{5}), P("z(5)"));
  EXPECT_EQ(expand_monomial(ZetaMonomial{2, 2, 2}), decompose_by_rank_assignment({{{2}}, {{2}}, {{2}}}));
}

TEST(EulerToMzvTest, KnownExpansions) {
  EXPECT_EQ(euler_to_mzv(EulerIndex({}, 2)), P("z(2)"));
  EXPECT_EQ(euler_to_mzv(EulerIndex({1}, 2)), P("z(3) + z(2,1)"));
  EXPECT_EQ(euler_to_mzv(EulerIndex({1, 1}, 3)), P("2*z(3,1,1) + z(3,2) + 2*z(4,1) + z(5)"));
  // The usual printed forms of the next two drop the z(2,3) term coming from
  // the j = n diagonal; the expansion of C below needs it.
  EXPECT_EQ(euler_to_mzv(EulerIndex({1, 1, 1}, 2)),
            P("6*z(2,1,1,1) + 3*z(2,2,1) + 3*z(2,1,2) + 6*z(3,1,1) + 3*z(3,2) + 3*z(4,1) + z(5) + z(2,3)"));
  EXPECT_EQ(euler_to_mzv(EulerIndex({1, 2}, 2)), P("z(2,2,1) + z(2,1,2) + z(3,2) + z(4,1) + z(5) + z(2,3)"));
}

TEST(EulerToMzvTest, CombinationForC) {
  const auto c = parse_zeta_expression("S(;2)*S(1;2) - S(1;2) - S(1,1;3) + S(1,1,1;2)/2 + S(1,2;2)/2");
  const auto expected = parse_zeta_expression(
      "(z(2) - 1)*(z(3) + z(2,1)) + z(3,1,1) + z(3,2) + 3*z(2,1,1,1) + 2*z(2,2,1) + 2*z(2,1,2) + z(2,3)");
  EXPECT_EQ(c.full_expansion(), expected.full_expansion());
}

// Independent route: expand each H_n^(p) into a sum over j_i <= n and
// decompose according to the set of distinct values among j_1..j_k, n.
MzvCombination euler_by_decomposition(const EulerIndex& e) {
  std::vector<Chain> chains{{{e.q()}}};
  std::vector<std::pair<int, int>> weak;
  for (std::size_t t = 0; t < e.ps().size(); ++t) {
    chains.push_back({{e.ps()[t]}});
    weak.emplace_back(0, static_cast<int>(t + 1));
  }
  return decompose_by_rank_assignment(chains, weak);
}

TEST(EulerToMzvTest, AgreesWithSetDecomposition) {
  for (const auto& e : {EulerIndex({}, 2), EulerIndex({1}, 2), EulerIndex({1, 1}, 3), EulerIndex({1, 1, 1}, 2),
                        EulerIndex({1, 2}, 2), EulerIndex({2, 3}, 2), EulerIndex({1, 1, 2}, 3), EulerIndex({3}, 4)}) {
    const auto mz = euler_to_mzv(e);
    EXPECT_EQ(mz, euler_by_decomposition(e)) << e.to_string();
    EXPECT_EQ(mz.uniform_weight(), e.weight());
    EXPECT_EQ(mz.constant(), 0);
    for (const auto& [x, c] : mz.terms()) EXPECT_LE(x.depth(), static_cast<int>(e.ps().size()) + 1);
  }
}

TEST(DualTest, KnownPairs) {
  EXPECT_EQ(dual(MzvIndex{2, 2, 1}), (MzvIndex{3, 2}));
  EXPECT_EQ(dual(MzvIndex{2, 1, 2}), (MzvIndex{2, 3}));
  EXPECT_EQ(dual(MzvIndex{3, 1, 1}), (MzvIndex{4, 1}));
  EXPECT_EQ(dual(MzvIndex{2, 1, 1, 1}), (MzvIndex{5}));
  EXPECT_EQ(dual(MzvIndex{2}), (MzvIndex{2}));
  EXPECT_EQ(dual(MzvIndex{3}), (MzvIndex{2, 1}));
  EXPECT_EQ(BinaryWord::encode(MzvIndex{3}).to_string(), "xxy");
  EXPECT_EQ(BinaryWord::encode(MzvIndex{3}).dual().to_string(), "xyy");
}

TEST(DualTest, InvolutionWeightAndDepthExhaustive) {
  int count = 0;
  for (int w = 2; w <= 9; ++w) {
    for (const auto& x : enumerate_indices(w)) {
      const auto d = dual(x);
      EXPECT_EQ(dual(d), x);
      EXPECT_EQ(d.weight(), w);
      EXPECT_EQ(x.depth() + d.depth(), w);
      ++count;
    }
  }
  EXPECT_EQ(count, 255);
}

TEST(BinaryWordTest, DecodeRejectsNonIndexWords) {
  using L = BinaryWord::Letter;
  EXPECT_THROW(BinaryWord({L::y, L::y}).decode(), DomainError);
  EXPECT_THROW(BinaryWord({L::x, L::x}).decode(), DomainError);
  EXPECT_FALSE(BinaryWord().encodes_index());
}

TEST(SumRelationTest, Examples) {
  auto r = sum_relation(3, 2);
  EXPECT_EQ(r.lhs, P("z(2,1)"));
  EXPECT_EQ(r.rhs, (MzvIndex{3}));
  r = sum_relation(5, 2);
  EXPECT_EQ(r.lhs, P("z(4,1) + z(3,2) + z(2,3)"));
  EXPECT_EQ(r.rhs, (MzvIndex{5}));
  EXPECT_EQ(sum_relation(5, 4).lhs, P("z(2,1,1,1)"));
  EXPECT_THROW(sum_relation(5, 5), DomainError);
  EXPECT_THROW(sum_relation(5, 1), DomainError);
}

TEST(ProductMonomialsTest, Weights) {
  EXPECT_EQ(product_monomials(5), (std::vector<ZetaMonomial>{{2, 3}}));
  EXPECT_EQ(product_monomials(6).size(), 3u);  // 2+2+2, 2+4, 3+3
  EXPECT_TRUE(product_monomials(3).empty());
}

TEST(MzvTextTest, RoundTripAndSyntax) {
  EXPECT_EQ(parse_mzv_index(" z( 3 ,2)"), (MzvIndex{3, 2}));
  EXPECT_EQ(parse_euler_index("S(1,1;3)"), EulerIndex({1, 1}, 3));
  EXPECT_EQ(parse_euler_index("S(;2)"), EulerIndex({}, 2));
  EXPECT_EQ(parse_euler_index("S(2,1;2)").ps(), (std::vector<int>{1, 2}));
  const auto c = P("-11/2*z(5) + 3*z(3,2) - 2");
  EXPECT_EQ(c.to_string(), "-11/2*z(5) + 3*z(3,2) - 2");
  EXPECT_EQ(P(c.to_string()), c);
  EXPECT_EQ(MzvCombination().to_string(), "0");
  EXPECT_EQ(parse_zeta_polynomial("4*z(2)*z(3) - 2*z(3) + 2*z(5)").to_string(), "4*z(2)*z(3) + 2*z(5) - 2*z(3)");
}

TEST(MzvTextTest, ErrorsCarryPosition) {
  try {
    parse_zeta_expression("z(3,2) + garbage(");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 9u);
  }
  EXPECT_THROW(parse_mzv_index("z(1,2)"), ParseError);
  EXPECT_THROW(parse_mzv_index("z()"), ParseError);
  EXPECT_THROW(parse_zeta_expression("z(2)/z(3)"), ParseError);
  EXPECT_THROW(parse_euler_index("S(1;1)"), ParseError);
  EXPECT_THROW(parse_zeta_expression("(z(2)"), ParseError);
}

TEST(ZetaExpressionTest, PrefactorsStayParameters) {
  const auto c2 = parse_zeta_expression("(z(2) - 1)*(z(3) + z(2,1))");
  EXPECT_EQ(c2.to_string(), "z(2)*z(2,1) + z(2)*z(3) - z(2,1) - z(3)");
  EXPECT_EQ(c2.full_expansion(), stuffle(P("z(2)"), P("z(3) + z(2,1)")) - P("z(3) + z(2,1)"));
  EXPECT_EQ(stuffle(MzvIndex{2}, MzvIndex{2, 1}), decompose_by_rank_assignment({{{2}}, {{2, 1}}}));
  EXPECT_EQ(stuffle(MzvIndex{2}, MzvIndex{2, 1}), P("2*z(2,2,1) + z(2,1,2) + z(2,3) + z(4,1)"));
  // Two MZV factors are stuffled, prefactors are not.
  const auto prod = parse_zeta_expression("z(2,1)*z(2,1)");
  EXPECT_TRUE(prod.polynomial_part().is_zero());
  EXPECT_EQ(prod.full_expansion(), stuffle(MzvIndex{2, 1}, MzvIndex{2, 1}));
}

}  // namespace
}  // namespace nines
