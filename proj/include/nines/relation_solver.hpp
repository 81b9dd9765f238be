#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nines/exact_matrix.hpp"
#include "nines/mzv.hpp"
#include "nines/numerics/mzv_numeric.hpp"
#include "nines/zeta_expr.hpp"

namespace nines {

enum class Family { duality, sum, stuffle, double_odd };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::duality: return "duality";
    case Family::sum: return "sum";
    case Family::stuffle: return "stuffle";
    case Family::double_odd: return "double-odd";
  }
  return "?";
}

inline Family parse_family(std::string_view name) {
  for (Family f : {Family::duality, Family::sum, Family::stuffle, Family::double_odd})
    if (family_name(f) == name) return f;
  throw ParseError("unknown relation family (expected duality, sum, stuffle or double-odd)", std::string(name), 0);
}

using FamilySet = std::set<Family>;

inline const FamilySet& all_families() {
  static const FamilySet all{Family::duality, Family::sum, Family::stuffle, Family::double_odd};
  return all;
}

// "duality,sum,stuffle"; "all" selects every family.
inline FamilySet parse_families(std::string_view text) {
  FamilySet out;
  if (text == "all") return all_families();
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(start, comma - start);
    if (item.empty()) throw ParseError("empty relation family name", std::string(text), start);
    out.insert(parse_family(item));
    start = comma + 1;
  }
  return out;
}

inline std::string families_to_string(const FamilySet& fs) {
  std::string s;
  for (Family f : fs) {
    if (!s.empty()) s += ",";
    s += family_name(f);
  }
  return s;
}

// lhs = rhs with lhs a weight-w MZV combination and rhs a polynomial in
// single zeta values of weight w.
struct Relation {
  MzvCombination lhs;
  ZetaPolynomial rhs;
  Family provenance;

  std::string to_string() const { return lhs.to_string() + " = " + rhs.to_string(); }
};

// Closed form for zeta(s,t) with s + t = k odd:
//   zeta(s,t) = (-1)^t sum_{h >= 0, k-2h >= 2} [C(k-2h-1, s-1) + C(k-2h-1, t-1)] zeta(2h) zeta(k-2h)
//               - zeta(k)/2 + [t odd, t >= 2] zeta(s) zeta(t),
// with zeta(0) = -1/2. Validated against mzv_numeric to 1e-10 before it is
// returned; a mismatch throws VerificationError.
inline ZetaPolynomial double_zeta_odd(int s, int t) {
  if (s < 2 || t < 1) throw DomainError("double_zeta_odd needs s >= 2 and t >= 1");
  const int k = s + t;
  if (k % 2 == 0) throw DomainError("double_zeta_odd only covers odd weight, got weight " + std::to_string(k));
  auto binom = [](int n, int r) -> Integer {
    if (r < 0 || r > n) return 0;
    Integer c = 1;
    for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
    return c;
  };
  ZetaPolynomial p;
  const Rational sign = (t % 2 == 0) ? 1 : -1;
  for (int h = 0; k - 2 * h >= 2; ++h) {
    const Rational c = sign * Rational(binom(k - 2 * h - 1, s - 1) + binom(k - 2 * h - 1, t - 1));
    if (h == 0)
      p.add(ZetaMonomial{k}, c * Rational(-1, 2));
    else
      p.add(ZetaMonomial{2 * h, k - 2 * h}, c);
  }
  p.add(ZetaMonomial{k}, Rational(-1, 2));
  if (t % 2 == 1 && t >= 2) p.add(ZetaMonomial{s, t}, 1);

  const int digits = 30;
  PrecisionScope scope(digits + kGuardDigits);
  const BigFloat diff = abs(mzv_numeric(MzvIndex{s, t}, digits) - evaluate(p, digits));
  if (diff > BigFloat("1e-10"))
    throw VerificationError("double_zeta_odd(" + std::to_string(s) + "," + std::to_string(t) + ") = " + p.to_string() +
                            " fails the numeric check (|difference| = " + to_scientific(diff) + ")");
  return p;
}

struct RejectedRelation {
  Relation relation;
  std::string diagnostic;
};

// Relations and elimination state for a single weight. Columns are the MZV
// basis followed by parameter monomials; each row encodes
//   sum mzv_coef * z(x) - sum param_coef * m = 0.
// Row 0 is the definitional row z(w) = zeta(w), which keeps z(w) and the
// parameter zeta(w) identified without counting as a family relation.
class RelationLayer {
public:
  RelationLayer(int weight, std::vector<Relation> relations, std::vector<RejectedRelation> rejected = {})
      : weight_(weight), basis_(enumerate_indices(weight)), relations_(std::move(relations)),
        rejected_(std::move(rejected)) {
    for (std::size_t c = 0; c < basis_.size(); ++c) column_of_[basis_[c]] = c;
    for (const auto& r : relations_) {
      for (const auto& [x, c] : r.lhs.terms())
        if (!column_of_.count(x))
          throw DomainError("relation " + r.to_string() + " leaves the weight-" + std::to_string(weight) + " basis");
      if (r.lhs.constant() != 0) throw DomainError("relation lhs must not carry a constant: " + r.to_string());
    }
    eliminate();
  }

  int weight() const noexcept { return weight_; }
  const std::vector<MzvIndex>& basis() const noexcept { return basis_; }
  const std::vector<Relation>& relations() const noexcept { return relations_; }
  const std::vector<RejectedRelation>& rejected() const noexcept { return rejected_; }
  std::size_t rank() const noexcept { return pivot_rows_.size(); }

  // Basis indices that are not pivots, in basis order.
  std::vector<MzvIndex> unreduced() const {
    std::vector<MzvIndex> out;
    for (std::size_t c = 0; c < basis_.size(); ++c)
      if (!pivot_rows_.count(c)) out.push_back(basis_[c]);
    return out;
  }

  // z(x) = poly + residual, residual over non-pivot basis elements.
  std::pair<ZetaPolynomial, MzvCombination> reduce_index(const MzvIndex& x) const {
    auto it = column_of_.find(x);
    if (it == column_of_.end()) throw DomainError(x.to_string() + " is not in the weight-" + std::to_string(weight_) + " basis");
    const std::size_t n = basis_.size();
    std::vector<Rational> v(echelon_.cols(), Rational(0));
    v[it->second] = 1;
    for (const auto& [col, row] : pivot_rows_) {
      if (v[col] == 0) continue;
      const Rational f = v[col];
      for (std::size_t c = 0; c < echelon_.cols(); ++c)
        if (echelon_(row, c) != 0) v[c] -= f * echelon_(row, c);
    }
    ZetaPolynomial poly;
    MzvCombination residual;
    for (std::size_t c = 0; c < n; ++c)
      if (v[c] != 0) residual.add(basis_[c], v[c]);
    for (std::size_t p = 0; p < params_.size(); ++p)
      if (v[n + p] != 0) poly.add(params_[p], v[n + p]);
    return {poly, residual};
  }

  // Pivot order: higher depth first, ties in canonical (descending) order.
  std::vector<std::size_t> pivot_order() const {
    std::vector<std::size_t> order(basis_.size());
    for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      if (basis_[x].depth() != basis_[y].depth()) return basis_[x].depth() > basis_[y].depth();
      return basis_[x] > basis_[y];
    });
    return order;
  }

private:
  void eliminate() {
    std::set<ZetaMonomial> param_set{ZetaMonomial{weight_}};
    for (const auto& r : relations_)
      for (const auto& [m, c] : r.rhs.terms()) param_set.insert(m);
    params_.assign(param_set.begin(), param_set.end());
    std::map<ZetaMonomial, std::size_t> param_col;
    for (std::size_t p = 0; p < params_.size(); ++p) param_col[params_[p]] = basis_.size() + p;

    const std::size_t cols = basis_.size() + params_.size();
    echelon_ = ExactMatrix(relations_.size() + 1, cols);
    echelon_(0, column_of_.at(MzvIndex{weight_})) = 1;
    echelon_(0, param_col.at(ZetaMonomial{weight_})) = -1;
    for (std::size_t r = 0; r < relations_.size(); ++r) {
      for (const auto& [x, c] : relations_[r].lhs.terms()) echelon_(r + 1, column_of_.at(x)) += c;
      for (const auto& [m, c] : relations_[r].rhs.terms()) echelon_(r + 1, param_col.at(m)) -= c;
    }
    const auto order = pivot_order();
    const auto pivots = rref(echelon_, order);
    for (std::size_t r = 0; r < pivots.size(); ++r) pivot_rows_[pivots[r]] = r;
  }

  int weight_;
  std::vector<MzvIndex> basis_;
  std::vector<Relation> relations_;
  std::vector<RejectedRelation> rejected_;
  std::map<MzvIndex, std::size_t> column_of_;
  std::vector<ZetaMonomial> params_;
  ExactMatrix echelon_;
  std::map<std::size_t, std::size_t> pivot_rows_;  // basis column -> echelon row
};

// One RelationLayer per weight in [min_weight, weight]. MZVs of lower weight
// that multiply single-zeta prefactors are reduced in their own layer.
class RelationSystem {
public:
  RelationSystem(int weight, int min_weight, FamilySet families, std::map<int, RelationLayer> layers)
      : weight_(weight), min_weight_(min_weight), families_(std::move(families)), layers_(std::move(layers)) {}

  int weight() const noexcept { return weight_; }
  int min_weight() const noexcept { return min_weight_; }
  const FamilySet& families() const noexcept { return families_; }
  const std::map<int, RelationLayer>& layers() const noexcept { return layers_; }
  const RelationLayer& layer(int w) const {
    auto it = layers_.find(w);
    if (it == layers_.end()) throw DomainError("relation system has no weight-" + std::to_string(w) + " layer");
    return it->second;
  }
  const RelationLayer& top() const { return layer(weight_); }
  const std::vector<MzvIndex>& basis() const { return top().basis(); }
  const std::vector<Relation>& relations() const { return top().relations(); }

private:
  int weight_;
  int min_weight_;
  FamilySet families_;
  std::map<int, RelationLayer> layers_;
};

struct GenerateOptions {
  int min_weight = 2;
  int digits = 30;
  double tolerance = 1e-8;
  bool numeric_check = true;
};

namespace detail {

inline std::vector<Relation> family_relations(int w, const FamilySet& families) {
  std::vector<Relation> out;
  if (families.count(Family::duality)) {
    for (const auto& x : enumerate_indices(w)) {
      const MzvIndex d = dual(x);
      if (d == x) continue;
      // One relation per pair, written from the shallower member.
      if (x.depth() > d.depth() || (x.depth() == d.depth() && x < d)) continue;
      MzvCombination lhs(x);
      lhs.add(d, -1);
      out.push_back({std::move(lhs), ZetaPolynomial{}, Family::duality});
    }
  }
  if (families.count(Family::sum) && w >= 3) {
    for (int m = 2; m <= w - 1; ++m) {
      auto s = sum_relation(w, m);
      out.push_back({std::move(s.lhs), ZetaPolynomial::zeta(w), Family::sum});
    }
  }
  if (families.count(Family::stuffle)) {
    for (const auto& m : product_monomials(w, 2)) out.push_back({expand_monomial(m), ZetaPolynomial(m, 1), Family::stuffle});
  }
  if (families.count(Family::double_odd) && w % 2 == 1 && w >= 3) {
    for (int s = w - 1; s >= 2; --s) out.push_back({MzvCombination(MzvIndex{s, w - s}), double_zeta_odd(s, w - s), Family::double_odd});
  }
  return out;
}

}  // namespace detail

// Numeric gate shared by generation and import: |lhs - rhs| < tolerance.
inline std::optional<std::string> check_relation_numerically(const Relation& r, int digits, double tolerance) {
  PrecisionScope scope(digits + kGuardDigits);
  const BigFloat diff = abs(evaluate(r.lhs, digits) - evaluate(r.rhs, digits));
  if (diff < BigFloat(tolerance)) return std::nullopt;
  return "relation " + r.to_string() + " [" + family_name(r.provenance) + "] fails the numeric check: |lhs - rhs| = " +
         to_scientific(diff);
}

inline RelationSystem build_relation_system(int weight, int min_weight, const FamilySet& families,
                                            const std::map<int, std::vector<Relation>>& candidates,
                                            const GenerateOptions& opt) {
  std::map<int, RelationLayer> layers;
  for (int w = min_weight; w <= weight; ++w) {
    std::vector<Relation> admitted;
    std::vector<RejectedRelation> rejected;
    auto it = candidates.find(w);
    if (it != candidates.end()) {
      for (const auto& r : it->second) {
        if (opt.numeric_check) {
          if (auto why = check_relation_numerically(r, opt.digits, opt.tolerance)) {
            rejected.push_back({r, *why});
            continue;
          }
        }
        admitted.push_back(r);
      }
    }
    layers.emplace(w, RelationLayer(w, std::move(admitted), std::move(rejected)));
  }
  return RelationSystem(weight, min_weight, families, std::move(layers));
}

// Relations of the chosen families at every weight in [min_weight, weight],
// each admitted only after the numeric check.
inline RelationSystem generate_relations(int weight, const FamilySet& families, const GenerateOptions& opt = {}) {
  if (weight < 3) throw DomainError("generate_relations needs weight >= 3");
  if (weight > kMzvMaxWeight) throw DomainError("generate_relations supports weight <= 12");
  if (opt.min_weight < 2 || opt.min_weight > weight) throw DomainError("min_weight must lie in [2, weight]");
  std::map<int, std::vector<Relation>> candidates;
  for (int w = opt.min_weight; w <= weight; ++w) candidates[w] = detail::family_relations(w, families);
  return build_relation_system(weight, opt.min_weight, families, candidates, opt);
}

struct ReductionResult {
  ZetaPolynomial reduced;
  // Unreduced remainder: non-pivot MZVs (possibly times single-zeta
  // prefactors), plus MZVs below the system's lowest layer.
  ZetaExpression residual;

  bool complete() const { return residual.is_zero(); }
  ZetaExpression total() const { return ZetaExpression(reduced) + residual; }
};

// Rewrites each MZV of depth >= 2 through its weight layer. Single-zeta
// prefactors are carried as parameters and multiply the layer's output.
inline ReductionResult reduce(const ZetaExpression& e, const RelationSystem& sys) {
  ReductionResult out;
  for (const auto& [t, c] : e.terms()) {
    if (!t.mzv) {
      out.reduced.add(t.prefactor, c);
      continue;
    }
    const int w = t.mzv->weight();
    if (w > sys.weight())
      throw DomainError("cannot reduce " + t.mzv->to_string() + ": weight " + std::to_string(w) +
                        " exceeds the system weight " + std::to_string(sys.weight()));
    if (w < sys.min_weight()) {
      out.residual.add(t, c);
      continue;
    }
    const auto [poly, residual] = sys.layer(w).reduce_index(*t.mzv);
    for (const auto& [m, pc] : poly.terms()) out.reduced.add(t.prefactor * m, c * pc);
    for (const auto& [x, rc] : residual.terms()) out.residual.add(t.prefactor, x, c * rc);
  }
  // Depth-1 residual entries fold into monomials; move them to `reduced`.
  for (const auto& [m, pc] : out.residual.polynomial_part().terms()) out.reduced.add(m, pc);
  out.residual = out.residual.mzv_part();
  return out;
}

inline ReductionResult reduce(const MzvCombination& c, const RelationSystem& sys) {
  for (const auto& [x, q] : c.terms())
    if (x.weight() < sys.min_weight() || x.weight() > sys.weight())
      throw DomainError("weight mismatch: " + x.to_string() + " is outside the system's weights [" +
                        std::to_string(sys.min_weight()) + ", " + std::to_string(sys.weight()) + "]");
  return reduce(ZetaExpression(c), sys);
}

struct RankReport {
  int weight = 0;
  std::size_t basis_size = 0;
  std::size_t rank = 0;
  std::size_t residual_dimension = 0;
  std::vector<MzvIndex> unreduced;
};

// Rank of the top layer with single-zeta monomials as parameters. The
// definitional row z(w) = zeta(w) is part of the rank.
inline RankReport rank_report(const RelationSystem& sys, std::optional<int> weight = std::nullopt) {
  const RelationLayer& l = sys.layer(weight.value_or(sys.weight()));
  RankReport r;
  r.weight = l.weight();
  r.basis_size = l.basis().size();
  r.rank = l.rank();
  r.residual_dimension = r.basis_size - r.rank;
  r.unreduced = l.unreduced();
  return r;
}

}  // namespace nines
