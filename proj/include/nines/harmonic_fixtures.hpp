#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "nines/harmonic.hpp"
#include "nines/harmonic_text.hpp"
#include "nines/harmonic_verify.hpp"

namespace nines::fixtures {

// Atoms beyond the built-ins (H, H2..H9, T1, T2):
//   h(a;k)       = sum_{i<=a} H_i / (i (i+k))          the inner sum
//   S1_2(b)      = sum_{i<=b} H_i / i^2
//   S11_3(b)     = sum_{i<=b} H_i^2 / i^3
//   S111_2(b)    = sum_{i<=b} H_i^3 / i^2
//   S12_2(b)     = sum_{i<=b} H_i H2_i / i^2
//   Sp(b;a)      = S'(a,b), the truncated outer sum
inline void declare_standard_atoms() {
  static std::once_flag once;
  std::call_once(once, [] {
    declare_atom("h", {"k"}, "H(i)/(i*(i+k))");
    declare_atom("S1_2", {}, "H(i)/i^2");
    declare_atom("S11_3", {}, "H(i)^2/i^3");
    declare_atom("S111_2", {}, "H(i)^3/i^2");
    declare_atom("S12_2", {}, "H(i)*H2(i)/i^2");
    declare_atom("Sp", {"a"}, "(H(i+1) - 1)/(i*(i+1)) * (i*H(i)^2 - 2*H(i) + i*H2(i) + 2*i*H2(a))/(2*i^2)");
  });
}

// Expression text of every named fixture.
inline const std::map<std::string, std::string>& texts() {
  static const std::map<std::string, std::string> t{
      {"f", "H(j)/(j*(j+k))"},
      {"g", "-(j*H(j) + k + j)/((k+j)*(k+j+1))"},
      {"h", "h(a;k)"},
      {"recurrence_rhs", "(a*(a+k+2) - (a+1)*(k+1)*H(a))/((k+1)*(a+k+1)*(a+k+2))"},
      {"inner_closed_form",
       "(k*H(k)^2 - 2*H(k) + k*H2(k) + 2*k*H2(a))/(2*k^2) - (k*H(a) - 1)/k^2*T1(k;a) - 1/k*T2(k;a)"},
      {"outer_summand", "(H(k+1) - 1)/(k*(k+1)) * (k*H(k)^2 - 2*H(k) + k*H2(k) + 2*k*H2(a))/(2*k^2)"},
      {"s_prime", "Sp(b;a)"},
      {"A",
       "1/(2*(b+1)^2)*(6*H(b) + 4*b*H(b) + 4*H(b)^2 + 3*b*H(b)^2 + H(b)^3 + b*H(b)^3 - 6*b*H2(a)"
       " + 2*H(b)*H2(a) + 2*b*H(b)*H2(a) - 2*H2(b) - 7*b*H2(b) + H(b)*H2(b) + b*H(b)*H2(b))"},
      {"B", "-2*b^2/(b+1)^2*(H2(a) + H2(b))"},
      {"C", "(H2(a) - 1)*S1_2(b) - S11_3(b) + 1/2*S111_2(b) + 1/2*S12_2(b)"},
  };
  return t;
}

inline SymExpr get(const std::string& name) {
  declare_standard_atoms();
  auto it = texts().find(name);
  if (it == texts().end()) throw DomainError("unknown fixture '" + name + "'");
  return parse_sym(it->second);
}

inline SymExpr abc() { return get("A") + get("B") + get("C"); }

// Outer antidifference g(a,k) = A(a,k) + B(a,k) + C(a,k).
inline SymExpr outer_antidifference() { return abc().renamed({{vars::b, {vars::k, 0}}}); }

inline TelescopeCertificate certificate() {
  const Polynomial k = Polynomial::variable(vars::k);
  TelescopeCertificate c;
  c.order = 2;
  c.c = {RationalFunction(k * k), RationalFunction(-(k + 1) * (k * 2 + 1)), RationalFunction((k + 1) * (k + 2))};
  c.g = get("g");
  return c;
}

inline Recurrence recurrence() {
  const TelescopeCertificate c = certificate();
  return Recurrence{vars::k, 2, c.c, get("recurrence_rhs")};
}

}  // namespace nines::fixtures
