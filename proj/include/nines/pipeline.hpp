#pragma once

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "nines/error.hpp"
#include "nines/harmonic_fixtures.hpp"
#include "nines/mzv_text.hpp"
#include "nines/numerics/euler_numeric.hpp"
#include "nines/numerics/mzv_numeric.hpp"
#include "nines/numerics/truncated.hpp"
#include "nines/relation_solver.hpp"

namespace nines {

// Environment variable that overrides the default precision.
inline constexpr const char* kDigitsEnv = "NINES_DIGITS";

struct PipelineConfig {
  int digits = 30;
  std::string digits_source = "default";
  int a = 10000;
  int b = 10000;
  double tolerance = 1e-2;
  FamilySet families = {Family::duality, Family::sum, Family::stuffle};
  int grid = 25;
  bool numeric = true;

  void validate() const {
    if (digits < 6 || digits > 500) throw DomainError("digits must be in 6..500");
    if (a < 4 || b < 4 || a > 1'000'000 || b > 1'000'000) throw DomainError("truncation limits a, b must be in 4..1000000");
    if (!(tolerance > 0)) throw DomainError("tolerance must be positive");
    if (grid < 2 || grid > 60) throw DomainError("grid must be in 2..60");
  }
};

// Default config with the precision taken from NINES_DIGITS when set.
inline PipelineConfig default_config() {
  PipelineConfig c;
  if (const char* env = std::getenv(kDigitsEnv); env && *env) {
    try {
      std::size_t used = 0;
      c.digits = std::stoi(env, &used);
      if (env[used] != '\0') throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw DomainError(std::string(kDigitsEnv) + " must be an integer, got '" + env + "'");
    }
    c.digits_source = std::string("env:") + kDigitsEnv;
  }
  return c;
}

struct StageResult {
  enum class Status { pass, fail, skipped };

  std::string name;
  Status status = Status::skipped;
  std::string details;
  std::vector<std::pair<std::string, std::string>> artifacts;
  double elapsed_ms = 0;

  void put(std::string key, std::string value) { artifacts.emplace_back(std::move(key), std::move(value)); }
};

inline std::string status_name(StageResult::Status s) {
  switch (s) {
    case StageResult::Status::pass: return "pass";
    case StageResult::Status::fail: return "fail";
    case StageResult::Status::skipped: return "skipped";
  }
  return "?";
}

struct PipelineReport {
  PipelineConfig config;
  std::vector<StageResult> stages;

  bool passed() const {
    for (const auto& s : stages)
      if (s.status == StageResult::Status::fail) return false;
    return true;
  }
  const StageResult& stage(const std::string& name) const {
    for (const auto& s : stages)
      if (s.name == name) return s;
    throw DomainError("no stage named '" + name + "'");
  }
};

namespace theorem1 {

// Euler-sum form of C and its MZV expansion as printed.
inline constexpr const char* kCEuler = "S(;2)*S(1;2) - S(1;2) - S(1,1;3) + S(1,1,1;2)/2 + S(1,2;2)/2";
inline constexpr const char* kCMzv =
    "(z(2) - 1)*(z(3) + z(2,1)) + z(3,1,1) + z(3,2) + 3*z(2,1,1,1) + 2*z(2,2,1) + 2*z(2,1,2) + z(2,3)";
inline constexpr const char* kCWaypoint = "(z(2) - 1)*(z(3) + z(2,1)) + z(4,1) + 3*z(2)*z(3)";
inline constexpr const char* kCFinal = "4*z(2)*z(3) - 2*z(3) + 2*z(5)";
inline constexpr const char* kRhs = "-4*z(2) - 2*z(3) + 4*z(2)*z(3) + 2*z(5)";
inline constexpr const char* kLimitB = "-4*z(2)";
inline constexpr double kBracketLower = 0.999197;
inline constexpr double kBracketUpper = 1.00093;
inline constexpr const char* kPrinted = "0.999222";

}  // namespace theorem1

namespace detail {

using Status = StageResult::Status;

inline StageResult run_stage(const std::string& name, const std::function<void(StageResult&)>& body) {
  StageResult s;
  s.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(s);
  } catch (const std::exception& e) {
    s.status = Status::fail;
    s.details = std::string("exception: ") + e.what();
  }
  s.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

inline void verdict(StageResult& s, bool ok, const std::string& pass_text, const std::string& fail_text) {
  s.status = ok ? Status::pass : Status::fail;
  s.details = ok ? pass_text : fail_text;
}

}  // namespace detail

// Replays the proof of S = -4 zeta(2) - 2 zeta(3) + 4 zeta(2) zeta(3) + 2 zeta(5)
// in eleven stages. Every stage runs; a failure never stops later stages, and
// stages that need an earlier result recompute it.
inline PipelineReport run_theorem1(const PipelineConfig& cfg) {
  using detail::Status;
  cfg.validate();
  fixtures::declare_standard_atoms();
  const int work = std::max(cfg.digits, 30);
  PipelineReport rep;
  rep.config = cfg;
  auto add = [&](const std::string& name, const std::function<void(StageResult&)>& body) {
    rep.stages.push_back(detail::run_stage(name, body));
  };
  auto numeric_stage = [&](const std::string& name, const std::function<void(StageResult&)>& body) {
    if (cfg.numeric) return add(name, body);
    StageResult s;
    s.name = name;
    s.details = "numeric stages disabled";
    rep.stages.push_back(s);
  };
  const SymExpr f = fixtures::get("f");
  const TelescopeCertificate cert = fixtures::certificate();

  add("creative_telescoping", [&](StageResult& s) {
    for (std::size_t t = 0; t < cert.c.size(); ++t) s.put("c" + std::to_string(t), cert.c[t].to_string());
    s.put("g", cert.g.to_string());
    s.put("f", f.to_string());
    const Verification v = verify_telescoping(cert, f, vars::k, vars::j);
    s.put("residue", v.residue.to_string());
    detail::verdict(s, v.verified, "c0 f(k,j) + c1 f(k+1,j) + c2 f(k+2,j) - (g(k,j+1) - g(k,j)) normalizes to 0",
                    "certificate residue is nonzero: " + v.residue.to_string());
  });

  add("recurrence", [&](StageResult& s) {
    const SymExpr sum = telescope_sum(cert, f, vars::k, vars::j, vars::a);
    const SymExpr expected = fixtures::get("recurrence_rhs");
    s.put("telescoped", sum.to_string());
    s.put("expected", expected.to_string());
    const IdentityCheck c = verify_identity(sum, expected);
    detail::verdict(s, c.verified(), "g(k,a+1) - g(k,1) equals the recurrence right side (" + c.method + ")",
                    "telescoped sum differs from the recurrence right side by " + c.difference.to_string());
  });

  add("inner_closed_form", [&](StageResult& s) {
    const SymExpr closed = fixtures::get("inner_closed_form");
    const Verification v = verify_recurrence_solution(closed, fixtures::recurrence());
    s.put("closed_form", closed.to_string());
    s.put("recurrence_residue", v.residue.to_string());
    const SymExpr h = fixtures::get("h");
    BruteEvaluator eval;
    int mismatches = 0;
    std::string first;
    for (int a = 1; a <= cfg.grid; ++a)
      for (int k = 1; k <= cfg.grid; ++k) {
        const std::map<Var, Rational> p{{vars::a, a}, {vars::k, k}};
        const Rational x = eval(h, p), y = eval(closed, p);
        if (x != y && mismatches++ == 0)
          first = "a=" + std::to_string(a) + ", k=" + std::to_string(k) + ": direct " + to_string(x) + " vs closed form " + to_string(y);
      }
    s.put("grid", "1 <= a,k <= " + std::to_string(cfg.grid));
    s.put("grid_mismatches", std::to_string(mismatches));
    if (!first.empty()) s.put("first_mismatch", first);
    detail::verdict(s, v.verified && mismatches == 0,
                    "closed form satisfies the recurrence symbolically and matches direct summation on the grid",
                    !v.verified ? "recurrence residue " + v.residue.to_string() : "grid mismatch at " + first);
  });

  numeric_stage("limit_to_zero", [&](StageResult& s) {
    const int k = 10;
    const auto rows = limit_terms_report({100, 10'000, 1'000'000}, k, work);
    bool ok = true;
    for (const auto& r : rows) {
      s.put("a=" + std::to_string(r.a), to_scientific(r.inv_k2_tail) + ", " + to_scientific(r.harmonic_tail) + ", " +
                                            to_scientific(r.nested_tail));
    }
    const auto& last = rows.back();
    for (const BigFloat& x : {last.inv_k2_tail, last.harmonic_tail, last.nested_tail}) ok = ok && x < BigFloat("1e-4");
    for (std::size_t t = 1; t < rows.size(); ++t)
      ok = ok && rows[t].inv_k2_tail < rows[t - 1].inv_k2_tail && rows[t].harmonic_tail < rows[t - 1].harmonic_tail &&
           rows[t].nested_tail < rows[t - 1].nested_tail;
    detail::verdict(s, ok, "the three dropped terms decrease in a and are below 1e-4 at a = 1e6 (k = 10)",
                    "dropped terms are not small/decreasing (expected < 1e-4 at a = 1e6)");
  });

  add("outer_telescoping", [&](StageResult& s) {
    const SymExpr g = fixtures::outer_antidifference();
    const SymExpr summand = fixtures::get("outer_summand");
    const SymExpr diff = normalize(g - g.shifted(vars::k, -1) - summand);
    const SymExpr at_zero = normalize(substitute_value(g, vars::k, 0));
    s.put("backward_difference_residue", diff.to_string());
    s.put("g_at_0", at_zero.to_string());
    const IdentityCheck id = verify_identity(fixtures::get("s_prime"), fixtures::abc());
    s.put("identity_method", id.method);
    // Exact spot checks of S'(a,b) = A + B + C.
    std::mt19937 rng(20260101);
    std::uniform_int_distribution<int> pick(1, 50);
    BruteEvaluator eval;
    const SymExpr lhs = fixtures::get("s_prime"), rhs = fixtures::abc();
    int checked = 0, bad = 0;
    for (int t = 0; t < 12; ++t) {
      const int a = pick(rng), b = pick(rng);
      const std::map<Var, Rational> p{{vars::a, a}, {vars::b, b}};
      ++checked;
      if (eval(lhs, p) != eval(rhs, p)) ++bad;
    }
    s.put("exact_spot_checks", std::to_string(checked) + " points, " + std::to_string(bad) + " mismatches");
    detail::verdict(s, diff.is_zero() && at_zero.is_zero() && id.verified() && bad == 0,
                    "g(k) - g(k-1) equals the outer summand and g(0) = 0, so S'(a,b) = A + B + C",
                    "outer telescoping failed: residue " + diff.to_string() + ", g(0) = " + at_zero.to_string());
  });

  add("euler_assembly", [&](StageResult& s) {
    for (const char* e : {"S(;2)", "S(1;2)", "S(1,1;3)", "S(1,1,1;2)", "S(1,2;2)"})
      s.put(e, euler_to_mzv(parse_euler_index(e)).to_string());
    const ZetaExpression c = parse_zeta_expression(theorem1::kCEuler);
    s.put("C", theorem1::kCEuler);
    s.put("C_mzv", c.to_string());
    s.status = Status::pass;
    s.details = "C assembled from the four sums of the outer antidifference";
  });

  add("mzv_expansion", [&](StageResult& s) {
    const MzvCombination got = parse_zeta_expression(theorem1::kCEuler).full_expansion();
    const MzvCombination want = parse_zeta_expression(theorem1::kCMzv).full_expansion();
    s.put("expected", theorem1::kCMzv);
    s.put("actual_expanded", got.to_string());
    s.put("expected_expanded", want.to_string());
    detail::verdict(s, got == want, "Euler-sum form of C expands to the MZV form exactly",
                    "expansions differ by " + (got - want).to_string());
  });

  ZetaPolynomial c_final;
  bool c_final_ok = false;
  add("reduction", [&](StageResult& s) {
    const ZetaExpression c = parse_zeta_expression(theorem1::kCMzv);
    // Waypoint: duality removes depth >= 3, stuffle rewrites z(2)*z(3);
    // nothing is touched below weight 5.
    FamilySet wp_families;
    for (Family fam : {Family::duality, Family::stuffle})
      if (cfg.families.count(fam)) wp_families.insert(fam);
    GenerateOptions wp_opt;
    wp_opt.min_weight = 5;
    const ReductionResult wp = reduce(c, generate_relations(5, wp_families, wp_opt));
    const ZetaExpression waypoint = parse_zeta_expression(theorem1::kCWaypoint);
    const bool wp_ok = wp.total() == waypoint;
    s.put("waypoint_families", families_to_string(wp_families));
    s.put("waypoint", wp.total().to_string());
    s.put("waypoint_expected", waypoint.to_string());

    const RelationSystem sys = generate_relations(5, cfg.families);
    const ReductionResult r = reduce(c, sys);
    s.put("families", families_to_string(cfg.families));
    s.put("reduced", r.reduced.to_string());
    s.put("residual", r.residual.to_string());
    s.put("expected", theorem1::kCFinal);
    const RankReport rr = rank_report(sys);
    s.put("rank", std::to_string(rr.rank) + "/" + std::to_string(rr.basis_size));
    c_final = r.reduced;
    c_final_ok = r.complete() && r.reduced == parse_zeta_polynomial(theorem1::kCFinal);
    std::string why;
    if (!wp_ok) why += "waypoint mismatch: got " + wp.total().to_string() + "; ";
    if (!r.complete()) why += "nonzero residual " + r.residual.to_string() + "; ";
    if (r.complete() && !c_final_ok) why += "reduced to " + r.reduced.to_string() + ", expected " + theorem1::kCFinal;
    detail::verdict(s, wp_ok && c_final_ok, "C reduces through the waypoint to 4 z(2) z(3) - 2 z(3) + 2 z(5)", why);
  });

  add("theorem_rhs", [&](StageResult& s) {
    const ZetaPolynomial lim_b = parse_zeta_polynomial(theorem1::kLimitB);
    const ZetaPolynomial total = c_final + lim_b;
    const ZetaPolynomial want = parse_zeta_polynomial(theorem1::kRhs);
    s.put("limit_A", "0");
    s.put("limit_B", lim_b.to_string());
    s.put("C", c_final.to_string());
    s.put("rhs", total.to_string());
    s.put("expected", want.to_string());
    detail::verdict(s, c_final_ok && total == want, "lim A + lim B + C = -4 z(2) - 2 z(3) + 4 z(2) z(3) + 2 z(5)",
                    "assembled right side " + total.to_string() + " differs from " + want.to_string());
  });

  numeric_stage("numeric_rhs", [&](StageResult& s) {
    const BigFloat v = rhs_theorem1(work);
    const BigFloat poly_v = evaluate(parse_zeta_polynomial(theorem1::kRhs), work);
    // Independent route: Euler sums by their own asymptotic method.
    BigFloat c_direct;
    {
      PrecisionScope scope(work + kGuardDigits);
      const auto e = [&](const char* t) { return euler_numeric(parse_euler_index(t), std::min(work, kEulerMaxDigits)); };
      c_direct = e("S(;2)") * e("S(1;2)") - e("S(1;2)") - e("S(1,1;3)") + e("S(1,1,1;2)") / 2 + e("S(1,2;2)") / 2;
    }
    const BigFloat c_reduced = evaluate(parse_zeta_polynomial(theorem1::kCFinal), work);
    const BigFloat gap = abs(BigFloat(c_direct - c_reduced));
    const std::string shown = to_decimal_truncated(v, cfg.digits);
    s.put("value", shown);
    s.put("value_rounded", to_decimal(v, cfg.digits));
    s.put("bracket", "[0.999197, 1.00093]");
    s.put("C_from_euler_sums", to_decimal(c_direct, 20));
    s.put("C_reduced", to_decimal(c_reduced, 20));
    s.put("C_gap", to_scientific(gap));
    const bool in_bracket = v >= BigFloat(theorem1::kBracketLower) - pow10(-12) && v <= BigFloat(theorem1::kBracketUpper);
    const bool printed = shown.rfind(theorem1::kPrinted, 0) == 0;
    const bool agree = abs(BigFloat(v - poly_v)) < pow10(-(work - 2)) && gap < BigFloat("1e-8");
    detail::verdict(s, in_bracket && printed && agree, "S = " + shown + "..., inside [0.999197, 1.00093]",
                    "numeric right side " + shown + " (printed " + theorem1::kPrinted + "..., bracket [0.999197, 1.00093], C gap " +
                        to_scientific(gap) + ")");
  });

  numeric_stage("convergence", [&](StageResult& s) {
    const TruncationReport t = eval_S_prime(cfg.a, cfg.b, work);
    const BigFloat rhs = rhs_theorem1(work);
    const BigFloat diff = abs(BigFloat(t.value - rhs));
    s.put("a", std::to_string(cfg.a));
    s.put("b", std::to_string(cfg.b));
    s.put("s_prime", to_decimal(t.value, 12));
    s.put("rhs", to_decimal(rhs, 12));
    s.put("difference", to_scientific(diff));
    s.put("tail_estimate", to_scientific(t.error_estimate));
    s.put("tolerance", to_scientific(BigFloat(cfg.tolerance)));
    detail::verdict(s, diff <= BigFloat(cfg.tolerance), "|S'(a,b) - rhs| = " + to_scientific(diff) + " within tolerance",
                    "|S'(a,b) - rhs| = " + to_scientific(diff) + " exceeds tolerance " + to_scientific(BigFloat(cfg.tolerance)));
  });
  return rep;
}

// Schema: {config, stages: [{name, status, details, artifacts, elapsed_ms}], overall}.
// Keys keep insertion order so identical runs serialize identically apart
// from elapsed_ms.
inline nlohmann::ordered_json report_to_json(const PipelineReport& r) {
  nlohmann::ordered_json j;
  const PipelineConfig& c = r.config;
  j["config"] = {{"digits", c.digits},
                 {"digits_source", c.digits_source},
                 {"a", c.a},
                 {"b", c.b},
                 {"tolerance", to_scientific(BigFloat(c.tolerance))},
                 {"families", families_to_string(c.families)},
                 {"grid", c.grid},
                 {"numeric", c.numeric}};
  j["stages"] = nlohmann::ordered_json::array();
  for (const auto& s : r.stages) {
    nlohmann::ordered_json st;
    st["name"] = s.name;
    st["status"] = status_name(s.status);
    st["details"] = s.details;
    st["artifacts"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : s.artifacts) st["artifacts"][k] = v;
    st["elapsed_ms"] = std::round(s.elapsed_ms * 1000) / 1000;
    j["stages"].push_back(std::move(st));
  }
  j["overall"] = r.passed() ? "pass" : "fail";
  return j;
}

inline void report_to_json(const PipelineReport& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << report_to_json(r).dump(2) << "\n";
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace nines
