#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nines/error.hpp"
#include "nines/harmonic_fixtures.hpp"
#include "nines/mzv_text.hpp"
#include "nines/numerics/mzv_numeric.hpp"
#include "nines/numerics/truncated.hpp"
#include "nines/pipeline.hpp"
#include "nines/relation_json.hpp"
#include "nines/relation_solver.hpp"

namespace nines {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerification = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

inline int max_mzv_weight(const ZetaExpression& e) {
  int w = 0;
  for (const auto& [t, c] : e.terms())
    if (t.mzv) w = std::max(w, t.mzv->weight());
  return w;
}

// Harmonic expression text where {name} stands for a named fixture.
inline SymExpr parse_sym_with_fixtures(const std::string& text) {
  fixtures::declare_standard_atoms();
  std::string expanded;
  for (std::size_t pos = 0; pos < text.size();) {
    if (text[pos] != '{') {
      expanded += text[pos++];
      continue;
    }
    const std::size_t close = text.find('}', pos);
    if (close == std::string::npos) throw ParseError("unterminated fixture reference", text, pos);
    const std::string name = text.substr(pos + 1, close - pos - 1);
    auto it = fixtures::texts().find(name);
    if (it == fixtures::texts().end()) throw ParseError("unknown fixture '" + name + "'", text, pos);
    expanded += "(" + it->second + ")";
    pos = close + 1;
  }
  return parse_sym(expanded);
}

}  // namespace detail

// Runs one command line (without the program name). Usage and parse errors
// return 2, failed verifications 1.
inline int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and numeric tools for Euler sums, multiple zeta values and the identity S = -4z(2) - 2z(3) + 4z(2)z(3) + 2z(5)", "nines"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  PipelineConfig cfg;
  std::optional<std::string> env_error;
  try {
    cfg = default_config();
  } catch (const Error& e) {
    env_error = e.what();
  }
  int result = kExitOk;

  // expand-euler
  std::string euler_text;
  auto* expand = app.add_subcommand("expand-euler", "Expand an Euler sum S(p1,..,pk;q) into multiple zeta values");
  expand->add_option("sum", euler_text, "Euler sum, e.g. 'S(1,2;2)'")->required();
  expand->callback([&] { out << euler_to_mzv(parse_euler_index(euler_text)) << "\n"; });

  // stuffle
  std::string st_x, st_y;
  auto* stuffle_cmd = app.add_subcommand("stuffle", "Stuffle product of two multiple zeta values");
  stuffle_cmd->add_option("x", st_x, "first index, e.g. 'z(2)'")->required();
  stuffle_cmd->add_option("y", st_y, "second index, e.g. 'z(3)'")->required();
  stuffle_cmd->callback([&] { out << stuffle(parse_mzv_index(st_x), parse_mzv_index(st_y)) << "\n"; });

  // dual
  std::string dual_text;
  auto* dual_cmd = app.add_subcommand("dual", "Dual index of a multiple zeta value");
  dual_cmd->add_option("z", dual_text, "index, e.g. 'z(2,2,1)'")->required();
  dual_cmd->callback([&] { out << dual(parse_mzv_index(dual_text)) << "\n"; });

  // reduce
  std::string reduce_text, reduce_families = "duality,sum,stuffle";
  int reduce_min_weight = 2;
  auto* reduce_cmd = app.add_subcommand("reduce", "Reduce an expression to single zeta values");
  reduce_cmd->add_option("expr", reduce_text, "expression in z(...), S(...;q), rationals")->required();
  reduce_cmd->add_option("--families", reduce_families, "relation families: duality,sum,stuffle,double-odd or 'all'")
      ->capture_default_str();
  reduce_cmd->add_option("--min-weight", reduce_min_weight, "lowest weight layer to use")->capture_default_str();
  reduce_cmd->callback([&] {
    const ZetaExpression e = parse_zeta_expression(reduce_text);
    const FamilySet fams = parse_families(reduce_families);
    const int w = std::max(3, detail::max_mzv_weight(e));
    GenerateOptions opt;
    opt.min_weight = std::min(reduce_min_weight, w);
    const ReductionResult r = reduce(e, generate_relations(w, fams, opt));
    out << "reduced: " << r.reduced << "\n";
    if (r.complete()) return;
    out << "residual: " << r.residual << "\n";
    out << "notice: not fully reduced with families " << families_to_string(fams)
        << "; one more relation is needed (for example --families all adds the double-odd family)\n";
    result = kExitVerification;
  });

  // eval
  std::string eval_text;
  std::optional<int> eval_digits;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate an expression numerically");
  eval_cmd->add_option("expr", eval_text, "expression in z(...), S(...;q), rationals")->required();
  eval_cmd->add_option("--digits", eval_digits, "digits after the point (default 30, or $NINES_DIGITS)");
  eval_cmd->callback([&] {
    if (!eval_digits && env_error) throw DomainError(*env_error);
    const int digits = eval_digits.value_or(cfg.digits);
    if (digits < 1 || digits > kMzvMaxDigits) throw DomainError("--digits must be in 1..100");
    out << to_decimal(evaluate(parse_zeta_expression(eval_text), digits), digits) << "\n";
  });

  // truncate
  int tr_a = 0, tr_b = 0, tr_digits = 30;
  bool tr_prime = false;
  auto* trunc_cmd = app.add_subcommand("truncate", "Truncated double sum S(a,b) or the single sum S'(a,b)");
  trunc_cmd->add_option("--a", tr_a, "upper limit of the inner sum")->required();
  trunc_cmd->add_option("--b", tr_b, "upper limit of the outer sum")->required();
  trunc_cmd->add_flag("--s-prime", tr_prime, "evaluate S'(a,b) instead of S(a,b)");
  trunc_cmd->add_option("--digits", tr_digits, "digits shown")->capture_default_str();
  trunc_cmd->callback([&] {
    if (tr_digits < 1 || tr_digits > 100) throw DomainError("--digits must be in 1..100");
    const TruncationReport r = tr_prime ? eval_S_prime(tr_a, tr_b, tr_digits) : eval_S_truncated(tr_a, tr_b, tr_digits);
    out << (tr_prime ? "S'(" : "S(") << r.a << "," << r.b << ") = " << to_decimal(r.value, tr_digits) << "\n";
    out << "mode: " << r.mode << "\n";
    if (r.exact && to_string(*r.exact).size() <= 200) out << "exact: " << to_string(*r.exact) << "\n";
    out << "error estimate: " << to_scientific(r.error_estimate) << "\n";
    out << "method: " << r.method << "\n";
  });

  // bracket
  int br_a = 0, br_b = 0;
  auto* bracket_cmd = app.add_subcommand("bracket", "Rigorous bracket of S from the truncated sum and a tail majorant");
  bracket_cmd->add_option("--a", br_a, "inner truncation")->required();
  bracket_cmd->add_option("--b", br_b, "outer truncation")->required();
  bracket_cmd->callback([&] {
    const Interval iv = bracket_S(br_a, br_b);
    out << "[" << to_decimal(iv.lower, 8) << ", " << to_decimal(iv.upper, 8) << "]\n";
  });

  // limit-terms
  int lt_k = 10;
  std::vector<int> lt_schedule{100, 10'000, 1'000'000};
  auto* limit_cmd = app.add_subcommand("limit-terms", "The three terms of the inner closed form that vanish as a grows");
  limit_cmd->add_option("--k", lt_k, "outer index k")->capture_default_str();
  limit_cmd->add_option("--a", lt_schedule, "increasing values of a")->delimiter(',')->capture_default_str();
  limit_cmd->callback([&] {
    out << "a, (1/k^2) sum 1/(a+i), (H_a/k) sum 1/(a+i), (1/k) sum (1/i) sum 1/(a+j)\n";
    for (const auto& r : limit_terms_report(lt_schedule, lt_k))
      out << r.a << ", " << to_scientific(r.inv_k2_tail) << ", " << to_scientific(r.harmonic_tail) << ", "
          << to_scientific(r.nested_tail) << "\n";
  });

  // verify-theorem1
  std::string json_path, vt_families = "duality,sum,stuffle";
  bool skip_numeric = false;
  std::optional<int> vt_digits;
  auto* verify = app.add_subcommand("verify-theorem1", "Replay the eleven-stage proof and report each stage");
  verify->add_option("--json", json_path, "write the report as JSON to PATH");
  verify->add_option("--a", cfg.a, "inner truncation for the convergence stage")->capture_default_str();
  verify->add_option("--b", cfg.b, "outer truncation for the convergence stage")->capture_default_str();
  verify->add_option("--digits", vt_digits, "reported digits (default 30, or $NINES_DIGITS)");
  verify->add_option("--tolerance", cfg.tolerance, "convergence tolerance")->capture_default_str();
  verify->add_option("--families", vt_families, "relation families for the reduction stage")->capture_default_str();
  verify->add_option("--grid", cfg.grid, "brute-force grid size for the inner closed form")->capture_default_str();
  verify->add_flag("--skip-numeric", skip_numeric, "skip the numeric stages");
  verify->callback([&] {
    if (!vt_digits && env_error) throw DomainError(*env_error);
    if (vt_digits) {
      cfg.digits = *vt_digits;
      cfg.digits_source = "flag";
    }
    cfg.families = parse_families(vt_families);
    cfg.numeric = !skip_numeric;
    const PipelineReport rep = run_theorem1(cfg);
    for (const auto& s : rep.stages) {
      std::ostringstream ms;
      ms.setf(std::ios::fixed);
      ms.precision(1);
      ms << s.elapsed_ms;
      out << "[" << status_name(s.status) << "] " << s.name << ": " << s.details << " (" << ms.str() << " ms)\n";
    }
    out << "overall: " << (rep.passed() ? "pass" : "fail") << "\n";
    if (!json_path.empty()) report_to_json(rep, json_path);
    if (!rep.passed()) result = kExitVerification;
  });

  // relations
  int rel_weight = 0, rel_min_weight = 2;
  std::string rel_families = "all", export_path, import_path;
  auto* rel = app.add_subcommand("relations", "Generate, rank and export the relation system of a weight");
  rel->add_option("--weight", rel_weight, "top weight (3..12)");
  rel->add_option("--min-weight", rel_min_weight, "lowest weight layer")->capture_default_str();
  rel->add_option("--families", rel_families, "relation families")->capture_default_str();
  rel->add_option("--export", export_path, "write the system as JSON to PATH");
  rel->add_option("--import", import_path, "load a system from JSON instead of generating");
  rel->callback([&] {
    std::optional<RelationSystem> sys;
    if (!import_path.empty()) {
      std::ifstream in(import_path);
      if (!in) throw DomainError("cannot read '" + import_path + "'");
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), import_path, 0);
      }
      sys.emplace(relation_system_from_json(j));
    } else {
      if (rel_weight == 0) throw DomainError("relations needs --weight or --import");
      GenerateOptions opt;
      opt.min_weight = rel_min_weight;
      sys.emplace(generate_relations(rel_weight, parse_families(rel_families), opt));
    }
    for (int w = sys->min_weight(); w <= sys->weight(); ++w) {
      const RankReport r = rank_report(*sys, w);
      out << "weight " << w << ": basis " << r.basis_size << ", rank " << r.rank << ", residual dimension "
          << r.residual_dimension << ", relations " << sys->layer(w).relations().size();
      if (!r.unreduced.empty()) {
        out << ", unreduced";
        for (const auto& x : r.unreduced) out << " " << x;
      }
      out << "\n";
    }
    if (!export_path.empty()) {
      std::ofstream o(export_path);
      if (!o) throw Error("cannot open '" + export_path + "' for writing");
      o << relation_system_to_json(*sys).dump(2) << "\n";
    }
  });

  // fixture
  std::string fixture_name;
  auto* fixture_cmd = app.add_subcommand("fixture", "Print a named symbolic fixture (no name lists them)");
  fixture_cmd->add_option("name", fixture_name, "fixture name");
  fixture_cmd->callback([&] {
    if (fixture_name.empty()) {
      for (const auto& [name, text] : fixtures::texts()) out << name << " = " << text << "\n";
      return;
    }
    out << fixtures::get(fixture_name).to_string() << "\n";
  });

  // verify-identity
  std::string id_lhs, id_rhs;
  auto* identity = app.add_subcommand("verify-identity", "Check a harmonic-sum identity exactly");
  identity->add_option("lhs", id_lhs, "left side, e.g. 'H(j+1)' or '{s_prime}' ({name} is a fixture)")->required();
  identity->add_option("rhs", id_rhs, "right side, e.g. 'H(j) + 1/(j+1)' or '{A} + {B} + {C}'")->required();
  identity->callback([&] {
    const IdentityCheck c = verify_identity(detail::parse_sym_with_fixtures(id_lhs), detail::parse_sym_with_fixtures(id_rhs));
    switch (c.status) {
      case IdentityCheck::Status::verified:
        out << "verified (" << c.method << ")\n";
        return;
      case IdentityCheck::Status::counterexample:
        out << "counterexample at";
        for (const auto& [v, n] : c.point) out << " " << v.name() << "=" << n;
        out << ": " << to_string(c.lhs_value) << " != " << to_string(c.rhs_value) << "\n";
        break;
      case IdentityCheck::Status::unresolved:
        out << "unresolved: difference normalizes to " << c.difference << "\n";
        break;
    }
    result = kExitVerification;
  });

  // verify-telescoping
  std::string tc_f, tc_g;
  std::vector<std::string> tc_c;
  auto* tele = app.add_subcommand("verify-telescoping",
                                  "Check sum_s c_s(k) f(k+s,j) = g(k,j+1) - g(k,j); defaults to the inner-sum certificate");
  tele->add_option("--f", tc_f, "summand f(k,j)");
  tele->add_option("--g", tc_g, "certificate g(k,j)");
  tele->add_option("--c", tc_c, "coefficients c_0,..,c_r in k")->delimiter(',');
  tele->callback([&] {
    TelescopeCertificate cert = fixtures::certificate();
    const SymExpr f = tc_f.empty() ? fixtures::get("f") : detail::parse_sym_with_fixtures(tc_f);
    if (!tc_g.empty()) cert.g = detail::parse_sym_with_fixtures(tc_g);
    if (!tc_c.empty()) {
      cert.c.clear();
      for (const auto& t : tc_c) {
        const SymExpr e = detail::parse_sym_with_fixtures(t);
        if (e.terms().size() > 1 || (e.terms().size() == 1 && !e.terms().begin()->first.is_one()))
          throw DomainError("coefficient '" + t + "' must be free of atoms");
        cert.c.push_back(e.is_zero() ? RationalFunction() : e.terms().begin()->second);
      }
      cert.order = static_cast<int>(cert.c.size()) - 1;
    }
    const Verification v = verify_telescoping(cert, f, vars::k, vars::j);
    out << (v.verified ? "verified" : "failed: " + v.detail) << "\n";
    if (v.verified) out << "sum over j = 1..a: " << telescope_sum(cert, f, vars::k, vars::j, vars::a) << "\n";
    if (!v.verified) result = kExitVerification;
  });

  // find-telescoper
  std::string ft_f, ft_den = "k+j";
  int ft_rmax = 2;
  TelescoperAnsatz ansatz;
  auto* find = app.add_subcommand("find-telescoper", "Search for a creative-telescoping certificate");
  find->add_option("f", ft_f, "summand f(k,j); default the inner-sum summand");
  find->add_option("--r-max", ft_rmax, "largest order tried")->capture_default_str();
  find->add_option("--degree", ansatz.numerator_degree, "degree bound of g's numerators")->capture_default_str();
  find->add_option("--coefficient-degree", ansatz.coefficient_degree, "degree bound of c_s in k")->capture_default_str();
  find->add_option("--denominator", ft_den, "base factor L(j,k); g's denominator is L(j) L(j+1) .. L(j+m)")->capture_default_str();
  find->add_option("--shifts", ansatz.denominator_shifts, "m in the denominator product")->capture_default_str();
  find->callback([&] {
    const SymExpr f = ft_f.empty() ? fixtures::get("f") : detail::parse_sym_with_fixtures(ft_f);
    const SymExpr den = parse_sym(ft_den);
    if (den.terms().size() != 1 || !den.terms().begin()->first.is_one() || !den.terms().begin()->second.is_polynomial())
      throw DomainError("--denominator must be a polynomial");
    ansatz.denominator_base = den.terms().begin()->second.numerator();
    const TelescoperSearch s = find_telescoper(f, ft_rmax, ansatz);
    for (const auto& line : s.log) out << line << "\n";
    if (!s.found()) {
      out << "not found within the ansatz\n";
      result = kExitVerification;
      return;
    }
    for (std::size_t t = 0; t < s.certificate->c.size(); ++t) out << "c" << t << " = " << s.certificate->c[t].to_string() << "\n";
    out << "g = " << s.certificate->g << "\n";
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const auto subs = app.get_subcommands();
    err << "error: " << e.what() << "\n" << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const VerificationError& e) {
    err << "verification failed: " << e.what() << "\n";
    return kExitVerification;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return result;
}

}  // namespace nines
