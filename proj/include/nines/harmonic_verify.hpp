#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nines/error.hpp"
#include "nines/exact_matrix.hpp"
#include "nines/harmonic.hpp"

namespace nines {

struct Verification {
  bool verified = false;
  // Normal form of the quantity that must vanish.
  SymExpr residue;
  std::string detail;

  explicit operator bool() const noexcept { return verified; }
};

struct IdentityCheck {
  enum class Status { verified, counterexample, unresolved };

  Status status = Status::unresolved;
  // How the identity was established: "normal form" or "induction on v from v0".
  std::string method;
  SymExpr difference;  // normalize(lhs - rhs)
  std::map<Var, long> point;  // counterexample assignment
  Rational lhs_value, rhs_value;

  bool verified() const noexcept { return status == Status::verified; }
};

namespace detail {

inline bool mentions_as_parameter(const SymExpr& e, Var v) {
  for (const auto& [m, c] : e.terms())
    for (const auto& [x, p] : m.factors())
      if (std::find(x.params.begin(), x.params.end(), v) != x.params.end()) return true;
  return false;
}

inline std::set<Var> atom_arguments(const SymExpr& e) {
  std::set<Var> out;
  for (const auto& [m, c] : e.terms())
    for (const auto& [x, p] : m.factors()) out.insert(x.var);
  return out;
}

// Proves d == 0 for all v >= v0 (where defined) from d(v) - d(v-1) == 0 and
// d(v0) == 0, the latter checked recursively in the remaining variables.
inline std::optional<std::string> prove_by_induction(const SymExpr& d, int depth) {
  if (depth > 3) return std::nullopt;
  for (Var v : atom_arguments(d)) {
    if (mentions_as_parameter(d, v)) continue;
    if (!normalize(d - d.shifted(v, -1)).is_zero()) continue;
    for (long v0 = 0; v0 <= 3; ++v0) {
      SymExpr base;
      try {
        base = normalize(substitute_value(d, v, v0));
      } catch (const ArithmeticError&) {
        continue;
      }
      const std::string here = "induction on " + v.name() + " from " + v.name() + "=" + std::to_string(v0);
      if (base.is_zero()) return here;
      if (auto inner = prove_by_induction(base, depth + 1)) return here + ", base case by " + *inner;
      break;
    }
  }
  return std::nullopt;
}

}  // namespace detail

// lhs == rhs is verified when the normal form of the difference vanishes, or,
// failing that, by induction on an atom argument: the backward difference
// normalizes to zero and a base case does. Otherwise a small integer grid is
// searched for a point where exact evaluation differs.
inline IdentityCheck verify_identity(const SymExpr& lhs, const SymExpr& rhs) {
  IdentityCheck r;
  r.difference = normalize(lhs - rhs);
  if (r.difference.is_zero()) {
    r.status = IdentityCheck::Status::verified;
    r.method = "normal form";
    return r;
  }
  if (auto how = detail::prove_by_induction(r.difference, 0)) {
    r.status = IdentityCheck::Status::verified;
    r.method = *how;
    return r;
  }
  const SymExpr both = lhs + rhs;
  const std::set<Var> vs_set = both.variables();
  const std::vector<Var> vs(vs_set.begin(), vs_set.end());
  const long hi = vs.size() <= 3 ? 4 : 3;
  BruteEvaluator eval;
  std::vector<long> values(vs.size(), 1);
  for (;;) {
    std::map<Var, Rational> point;
    for (std::size_t t = 0; t < vs.size(); ++t) point[vs[t]] = values[t];
    try {
      const Rational x = eval(lhs, point), y = eval(rhs, point);
      if (x != y) {
        r.status = IdentityCheck::Status::counterexample;
        for (std::size_t t = 0; t < vs.size(); ++t) r.point[vs[t]] = values[t];
        r.lhs_value = x;
        r.rhs_value = y;
        return r;
      }
    } catch (const ArithmeticError&) {
    }
    std::size_t t = 0;
    while (t < values.size() && values[t] == hi) values[t++] = 1;
    if (t == values.size()) break;
    ++values[t];
  }
  return r;
}

// sum_{s=0}^{r} c_s(k) f(k+s, j) = g(k, j+1) - g(k, j)
struct TelescopeCertificate {
  int order = 1;
  std::vector<RationalFunction> c;  // c_0..c_r in the shift variable
  SymExpr g;

  void validate() const {
    if (order < 1) throw DomainError("telescoping certificate needs order r >= 1");
    if (static_cast<int>(c.size()) != order + 1) throw DomainError("telescoping certificate needs r + 1 coefficients");
  }
};

// sum_{s=0}^{r} c_s y(v+s) = rhs
struct Recurrence {
  Var var;
  int order = 1;
  std::vector<RationalFunction> c;
  SymExpr rhs;

  void validate() const {
    if (order < 1 || static_cast<int>(c.size()) != order + 1) throw DomainError("recurrence needs order r >= 1 and r + 1 coefficients");
    if (c.back().is_zero()) throw DomainError("leading recurrence coefficient is zero");
  }
};

inline SymExpr apply_operator(const std::vector<RationalFunction>& c, const SymExpr& y, Var v) {
  SymExpr r;
  for (std::size_t s = 0; s < c.size(); ++s) r += y.shifted(v, static_cast<int>(s)).scaled(c[s]);
  return r;
}

inline Verification verify_telescoping(const TelescopeCertificate& cert, const SymExpr& f, Var shift_var, Var telescope_var) {
  cert.validate();
  const SymExpr lhs = apply_operator(cert.c, f, shift_var);
  const SymExpr rhs = cert.g.shifted(telescope_var, 1) - cert.g;
  Verification v;
  v.residue = normalize(lhs - rhs);
  v.verified = v.residue.is_zero();
  v.detail = v.verified ? "creative telescoping relation normalizes to 0" : "residue " + v.residue.to_string();
  return v;
}

// Sums the verified relation over telescope_var = 1..upper:
//   sum_s c_s(k) sum_{j=1}^{upper} f(k+s, j) = g(k, upper+1) - g(k, 1).
inline SymExpr telescope_sum(const TelescopeCertificate& cert, const SymExpr& f, Var shift_var, Var telescope_var, Var upper) {
  if (!verify_telescoping(cert, f, shift_var, telescope_var)) throw VerificationError("telescope_sum needs a verified certificate");
  return normalize(cert.g.renamed({{telescope_var, {upper, 1}}}) - substitute_value(cert.g, telescope_var, 1));
}

inline SymExpr telescope_sum(const TelescopeCertificate& cert, const SymExpr& f, Var shift_var, Var telescope_var, long upper) {
  if (!verify_telescoping(cert, f, shift_var, telescope_var)) throw VerificationError("telescope_sum needs a verified certificate");
  return normalize(substitute_value(cert.g, telescope_var, upper + 1) - substitute_value(cert.g, telescope_var, 1));
}

inline Verification verify_recurrence_solution(const SymExpr& candidate, const Recurrence& rec) {
  rec.validate();
  Verification v;
  v.residue = normalize(apply_operator(rec.c, candidate, rec.var) - rec.rhs);
  v.verified = v.residue.is_zero();
  v.detail = v.verified ? "recurrence residue normalizes to 0" : "residue " + v.residue.to_string();
  return v;
}

// g = sum_{mu} P_mu(j,k) / D(j,k) * mu with mu ranging over 1 and the atom
// monomials of f, deg P_mu <= numerator_degree, and
// D = prod_{t=0}^{m} base(j + t). Each c_s is a polynomial in k of degree
// <= coefficient_degree.
struct TelescoperAnsatz {
  Var shift_var = vars::k;
  Var telescope_var = vars::j;
  int numerator_degree = 2;
  int coefficient_degree = 2;
  Polynomial denominator_base = Polynomial::variable(vars::k) + Polynomial::variable(vars::j);
  int denominator_shifts = 1;
};

struct TelescoperSearch {
  std::optional<TelescopeCertificate> certificate;
  // One line per order tried: unknowns, equations, solution dimension.
  std::vector<std::string> log;

  bool found() const noexcept { return certificate.has_value(); }
};

namespace detail {

inline Polynomial lcm(const Polynomial& x, const Polynomial& y) {
  const Polynomial g = gcd(x, y);
  return *(x * y).divide_exact(g);
}

inline std::vector<Exponents> monomials_up_to(Var u, Var v, int degree) {
  std::vector<Exponents> out;  // total degree descending
  for (int d = degree; d >= 0; --d)
    for (int a = d; a >= 0; --a) {
      Exponents e;
      e.set(u, static_cast<std::uint32_t>(a));
      e.set(v, static_cast<std::uint32_t>(d - a));
      out.push_back(e);
    }
  return out;
}

}  // namespace detail

// Searches r = 1..r_max for the lowest-order certificate in the ansatz.
// Undetermined coefficients enter linearly; clearing denominators monomial by
// monomial gives a homogeneous system solved exactly. Solutions with c = 0
// (a j-independent g) are factored out, and c_r is made monic.
inline TelescoperSearch find_telescoper(const SymExpr& f, int r_max, const TelescoperAnsatz& ansatz = {}) {
  if (r_max < 1) throw DomainError("find_telescoper needs r_max >= 1");
  if (r_max > 4) throw DomainError("find_telescoper supports r_max <= 4");
  if (ansatz.numerator_degree < 0 || ansatz.coefficient_degree < 0 || ansatz.denominator_shifts < 0)
    throw DomainError("find_telescoper degree bounds must be non-negative");
  const Var k = ansatz.shift_var, j = ansatz.telescope_var;
  const SymExpr fn = normalize(f);
  TelescoperSearch out;

  std::vector<AtomMonomial> mus{AtomMonomial{}};
  for (const auto& [m, c] : fn.terms())
    if (!m.is_one()) mus.push_back(m);
  Polynomial den(1);
  for (int t = 0; t <= ansatz.denominator_shifts; ++t) den *= ansatz.denominator_base.shifted(j, t);
  const auto p_monos = detail::monomials_up_to(j, k, ansatz.numerator_degree);

  for (int r = 1; r <= r_max; ++r) {
    const int dc = ansatz.coefficient_degree;
    const std::size_t n_c = static_cast<std::size_t>((r + 1) * (dc + 1));
    std::vector<SymExpr> contrib;  // column -> its contribution to lhs - rhs
    for (int s = 0; s <= r; ++s) {
      const SymExpr fs = normalize(fn.shifted(k, s));
      for (int e = 0; e <= dc; ++e) contrib.push_back(fs.scaled(RationalFunction(Polynomial::variable(k).pow(e))));
    }
    for (const auto& mu : mus)
      for (const auto& pe : p_monos) {
        const SymExpr g = SymExpr::term(mu, RationalFunction(Polynomial::monomial(pe, 1), den));
        contrib.push_back(-(normalize(g.shifted(j, 1)) - g));
      }
    const std::size_t n = contrib.size();

    // Clear denominators per atom monomial, then match coefficients.
    std::map<AtomMonomial, Polynomial> common;
    for (const auto& e : contrib)
      for (const auto& [m, c] : e.terms()) {
        auto [it, fresh] = common.emplace(m, c.denominator());
        if (!fresh) it->second = detail::lcm(it->second, c.denominator());
      }
    std::map<std::pair<AtomMonomial, Exponents>, std::size_t> row_of;
    std::vector<std::vector<std::pair<std::size_t, Rational>>> entries;
    for (std::size_t col = 0; col < n; ++col)
      for (const auto& [m, c] : contrib[col].terms()) {
        const Polynomial num = c.numerator() * *common.at(m).divide_exact(c.denominator());
        for (const auto& [ex, q] : num.terms()) {
          auto [it, fresh] = row_of.emplace(std::pair{m, ex}, entries.size());
          if (fresh) entries.emplace_back();
          entries[it->second].emplace_back(col, q);
        }
      }
    ExactMatrix a(entries.size(), n);
    for (std::size_t row = 0; row < entries.size(); ++row)
      for (const auto& [col, q] : entries[row]) a(row, col) += q;
    const std::vector<Rational> zero(entries.size(), Rational(0));
    const SolveResult sol = exact_solve(a, zero);
    out.log.push_back("r=" + std::to_string(r) + ": " + std::to_string(n) + " unknowns, " + std::to_string(entries.size()) +
                      " equations, solution dimension " + std::to_string(sol.nullspace.size()));
    if (sol.nullspace.empty()) continue;

    // Row-reduce the solution space with c_r's columns first (low degree
    // first), then the other c_s, then g; rows pivoting in g carry c = 0.
    ExactMatrix ns(sol.nullspace.size(), n);
    for (std::size_t t = 0; t < sol.nullspace.size(); ++t)
      for (std::size_t col = 0; col < n; ++col) ns(t, col) = sol.nullspace[t][col];
    std::vector<std::size_t> order;
    for (int s = r; s >= 0; --s)
      for (int e = 0; e <= dc; ++e) order.push_back(static_cast<std::size_t>(s * (dc + 1) + e));
    for (std::size_t col = n_c; col < n; ++col) order.push_back(col);
    const auto pivots = rref(ns, order);
    const std::size_t cr_begin = static_cast<std::size_t>(r * (dc + 1));
    if (pivots.empty() || pivots[0] < cr_begin || pivots[0] >= n_c) continue;

    auto g_nonzero = [&](std::size_t row) {
      for (std::size_t col = n_c; col < n; ++col)
        if (ns(row, col) != 0) return true;
      return false;
    };
    std::vector<Rational> v(n);
    for (std::size_t col = 0; col < n; ++col) v[col] = ns(0, col);
    if (!g_nonzero(0))
      for (std::size_t row = 1; row < pivots.size() && pivots[row] < n_c; ++row)
        if (g_nonzero(row)) {
          for (std::size_t col = 0; col < n; ++col) v[col] += ns(row, col);
          break;
        }

    TelescopeCertificate cert;
    cert.order = r;
    for (int s = 0; s <= r; ++s) {
      Polynomial cs;
      for (int e = 0; e <= dc; ++e) cs += Polynomial::variable(k).pow(e).scaled(v[static_cast<std::size_t>(s * (dc + 1) + e)]);
      cert.c.emplace_back(cs);
    }
    std::size_t col = n_c;
    for (const auto& mu : mus) {
      Polynomial p;
      for (const auto& pe : p_monos) p += Polynomial::monomial(pe, v[col++]);
      cert.g += SymExpr::term(mu, RationalFunction(p, den));
    }
    const Polynomial& lead = cert.c.back().numerator();
    const Rational scale = Rational(1) / lead.coefficients_in(k).back().constant_value();
    for (auto& cs : cert.c) cs = cs * RationalFunction(scale);
    cert.g = cert.g.scaled(RationalFunction(scale));
    if (!verify_telescoping(cert, f, k, j)) throw VerificationError("find_telescoper produced a certificate that fails verification");
    out.certificate = std::move(cert);
    return out;
  }
  return out;
}

}  // namespace nines
