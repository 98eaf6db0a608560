#include "aluni/interpretation.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "aluni/diagnostics.hpp"

namespace aluni {

// ── Signature helpers ───────────────────────────────────────────────────────

void Interpretation::pad_signature(const KnowledgeBase& k) {
  for (const auto& a : k.concepts) concepts.try_emplace(a);
  for (const auto& p : k.roles) roles.try_emplace(p);
}

namespace {

const std::set<int>& concept_ext(const Interpretation& i,
                                 const std::string& name) {
  auto it = i.concepts.find(name);
  if (it == i.concepts.end())
    throw SignatureError("no extension for concept '" + name + "'");
  return it->second;
}

const std::set<std::pair<int, int>>& role_ext(const Interpretation& i,
                                              const std::string& name) {
  auto it = i.roles.find(name);
  if (it == i.roles.end())
    throw SignatureError("no extension for role '" + name + "'");
  return it->second;
}

/// Successor lists of `r` under `i`: successors_of[o] = {e | (o,e) ∈ r^I},
/// with an inverted role reading pairs backwards.
std::vector<std::vector<int>> successors(const RoleExpr& r,
                                         const Interpretation& i) {
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(i.domain));
  for (const auto& [x, y] : role_ext(i, r.name)) {
    int from = r.inverted ? y : x;
    int to = r.inverted ? x : y;
    succ[static_cast<std::size_t>(from)].push_back(to);
  }
  return succ;
}

}  // namespace

// ── Evaluator ───────────────────────────────────────────────────────────────

std::set<int> evaluate_concept(const ConceptExpr& c, const Interpretation& i) {
  switch (c.kind()) {
    case ConceptKind::Top: {
      std::set<int> all;
      for (int d = 0; d < i.domain; ++d) all.insert(d);
      return all;
    }
    case ConceptKind::Bottom:
      return {};
    case ConceptKind::Atomic:
      return concept_ext(i, c.atom_name());
    case ConceptKind::NegAtomic: {
      const auto& ext = concept_ext(i, c.atom_name());
      std::set<int> out;
      for (int d = 0; d < i.domain; ++d)
        if (!ext.count(d)) out.insert(d);
      return out;
    }
    case ConceptKind::And: {
      std::set<int> out = evaluate_concept(*c.parts().front(), i);
      for (std::size_t idx = 1; idx < c.parts().size(); ++idx) {
        std::set<int> next = evaluate_concept(*c.parts()[idx], i);
        std::set<int> inter;
        std::set_intersection(out.begin(), out.end(), next.begin(), next.end(),
                              std::inserter(inter, inter.begin()));
        out = std::move(inter);
      }
      return out;
    }
    case ConceptKind::Or: {
      std::set<int> out;
      for (const auto& part : c.parts()) {
        std::set<int> next = evaluate_concept(*part, i);
        out.insert(next.begin(), next.end());
      }
      return out;
    }
    case ConceptKind::Forall: {
      std::set<int> bodyExt = evaluate_concept(*c.body(), i);
      auto succ = successors(c.role(), i);
      std::set<int> out;
      for (int d = 0; d < i.domain; ++d) {
        bool all_in = true;
        for (int e : succ[static_cast<std::size_t>(d)])
          if (!bodyExt.count(e)) {
            all_in = false;
            break;
          }
        if (all_in) out.insert(d);
      }
      return out;
    }
    case ConceptKind::AtLeast:
    case ConceptKind::AtMost: {
      auto succ = successors(c.role(), i);
      std::set<int> out;
      for (int d = 0; d < i.domain; ++d) {
        auto count = succ[static_cast<std::size_t>(d)].size();
        bool in = c.kind() == ConceptKind::AtLeast ? count >= c.bound()
                                                   : count <= c.bound();
        if (in) out.insert(d);
      }
      return out;
    }
  }
  return {};  // unreachable
}

// ── Model checking ──────────────────────────────────────────────────────────

ModelCheckResult is_model(const KnowledgeBase& k, const Interpretation& i) {
  // Demand full signature coverage up front, even for unused symbols.
  for (const auto& a : k.concepts) concept_ext(i, a);
  for (const auto& p : k.roles) role_ext(i, p);

  ModelCheckResult result;
  result.ok = true;
  for (std::size_t idx = 0; idx < k.assertions.size(); ++idx) {
    const auto& assertion = k.assertions[idx];
    const auto& lhsExt = concept_ext(i, assertion.lhs);
    std::set<int> rhsExt = evaluate_concept(*assertion.rhs, i);
    for (int d : lhsExt) {
      if (!rhsExt.count(d)) {
        result.ok = false;
        result.violations.push_back({idx, assertion.lhs, assertion.rhs, d});
        break;  // one witness per violated assertion
      }
    }
  }
  return result;
}

// ── Disjoint union ──────────────────────────────────────────────────────────

Interpretation disjoint_union(const Interpretation& a,
                              const Interpretation& b) {
  auto same_keys = [](const auto& m1, const auto& m2) {
    if (m1.size() != m2.size()) return false;
    auto it = m2.begin();
    for (const auto& [key, value] : m1) {
      (void)value;
      if (it->first != key) return false;
      ++it;
    }
    return true;
  };
  if (!same_keys(a.concepts, b.concepts) || !same_keys(a.roles, b.roles))
    throw SignatureError("disjoint_union requires identical signatures");

  Interpretation out;
  out.domain = a.domain + b.domain;
  const int shift = a.domain;
  for (const auto& [name, ext] : a.concepts) {
    auto& target = out.concepts[name];
    target = ext;
    for (int d : b.concepts.at(name)) target.insert(d + shift);
  }
  for (const auto& [name, pairs] : a.roles) {
    auto& target = out.roles[name];
    target = pairs;
    for (const auto& [x, y] : b.roles.at(name))
      target.insert({x + shift, y + shift});
  }
  return out;
}

// ── Serialization ───────────────────────────────────────────────────────────

std::string to_json(const Interpretation& i, bool pretty) {
  nlohmann::json j;
  j["domain"] = i.domain;
  j["concepts"] = nlohmann::json::object();
  for (const auto& [name, ext] : i.concepts)
    j["concepts"][name] = std::vector<int>(ext.begin(), ext.end());
  j["roles"] = nlohmann::json::object();
  for (const auto& [name, pairs] : i.roles) {
    auto& list = j["roles"][name] = nlohmann::json::array();
    for (const auto& [x, y] : pairs) list.push_back({x, y});
  }
  return pretty ? j.dump(2) : j.dump();
}

Interpretation interpretation_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("bad interpretation JSON: ") + e.what());
  }
  try {
    Interpretation out;
    out.domain = j.at("domain").get<int>();
    if (out.domain < 0) throw ParseError("domain size must be nonnegative");
    auto check_index = [&](int d) {
      if (d < 0 || d >= out.domain)
        throw ParseError("individual index " + std::to_string(d) +
                         " outside domain of size " +
                         std::to_string(out.domain));
      return d;
    };
    if (j.contains("concepts"))
      for (const auto& [name, list] : j.at("concepts").items()) {
        auto& ext = out.concepts[name];
        for (const auto& d : list) ext.insert(check_index(d.get<int>()));
      }
    if (j.contains("roles"))
      for (const auto& [name, list] : j.at("roles").items()) {
        auto& ext = out.roles[name];
        for (const auto& pair : list) {
          if (!pair.is_array() || pair.size() != 2)
            throw ParseError("role pair must be a two-element array");
          ext.insert({check_index(pair.at(0).get<int>()),
                      check_index(pair.at(1).get<int>())});
        }
      }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad interpretation JSON: ") + e.what());
  }
}

}  // namespace aluni
