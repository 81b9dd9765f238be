#pragma once

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

#include "nines/mzv_text.hpp"
#include "nines/relation_solver.hpp"

namespace nines {

// Relation-system interchange format:
//   {
//     "weight": 5,
//     "min_weight": 2,
//     "families": ["duality", "sum", "stuffle"],
//     "basis": ["z(5)", "z(4,1)", ...],              top-layer basis order
//     "relations": [{"lhs": "z(4,1) + z(3,2) + z(2,3)", "rhs": "z(5)", "provenance": "sum"}, ...]
//   }
// Relations of every layer are listed together; each belongs to the layer of
// its lhs weight. Values use the MZV text syntax.
inline nlohmann::json relation_system_to_json(const RelationSystem& sys) {
  nlohmann::json j;
  j["weight"] = sys.weight();
  j["min_weight"] = sys.min_weight();
  j["families"] = nlohmann::json::array();
  for (Family f : sys.families()) j["families"].push_back(family_name(f));
  j["basis"] = nlohmann::json::array();
  for (const auto& x : sys.basis()) j["basis"].push_back(x.to_string());
  j["relations"] = nlohmann::json::array();
  for (const auto& [w, layer] : sys.layers())
    for (const auto& r : layer.relations())
      j["relations"].push_back({{"lhs", r.lhs.to_string()}, {"rhs", r.rhs.to_string()}, {"provenance", family_name(r.provenance)}});
  return j;
}

// Rebuilds the system, re-running elimination and (unless disabled) the
// numeric gate on every imported relation.
inline RelationSystem relation_system_from_json(const nlohmann::json& j, const GenerateOptions& opt = {}) {
  try {
    const int weight = j.at("weight").get<int>();
    const int min_weight = j.value("min_weight", weight);
    if (weight < 3 || weight > kMzvMaxWeight || min_weight < 2 || min_weight > weight)
      throw DomainError("relation system JSON has an invalid weight range");
    FamilySet families;
    for (const auto& f : j.at("families")) families.insert(parse_family(f.get<std::string>()));
    std::map<int, std::vector<Relation>> candidates;
    for (const auto& r : j.at("relations")) {
      Relation rel{parse_mzv_combination(r.at("lhs").get<std::string>()), parse_zeta_polynomial(r.at("rhs").get<std::string>()),
                   parse_family(r.at("provenance").get<std::string>())};
      const auto w = rel.lhs.uniform_weight();
      if (!w) throw DomainError("imported relation has mixed or empty weight: " + rel.to_string());
      if (*w < min_weight || *w > weight) throw DomainError("imported relation outside the weight range: " + rel.to_string());
      candidates[*w].push_back(std::move(rel));
    }
    if (j.contains("basis")) {
      std::vector<std::string> expected;
      for (const auto& x : enumerate_indices(weight)) expected.push_back(x.to_string());
      if (j.at("basis").get<std::vector<std::string>>() != expected)
        throw DomainError("relation system JSON basis does not match the canonical weight-" + std::to_string(weight) + " basis");
    }
    return build_relation_system(weight, min_weight, families, candidates, opt);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed relation system JSON: ") + e.what(), "", 0);
  }
}

}  // namespace nines
