#include "aluni/kb.hpp"

#include <algorithm>
#include <map>

namespace aluni {

// ── Signature maintenance ───────────────────────────────────────────────────

bool KnowledgeBase::has_concept(const std::string& a) const {
  return std::binary_search(concepts.begin(), concepts.end(), a);
}

bool KnowledgeBase::has_role(const std::string& p) const {
  return std::binary_search(roles.begin(), roles.end(), p);
}

void KnowledgeBase::add_concept(const std::string& a) {
  auto it = std::lower_bound(concepts.begin(), concepts.end(), a);
  if (it == concepts.end() || *it != a) concepts.insert(it, a);
}

void KnowledgeBase::add_role(const std::string& p) {
  auto it = std::lower_bound(roles.begin(), roles.end(), p);
  if (it == roles.end() || *it != p) roles.insert(it, p);
}

bool KnowledgeBase::operator==(const KnowledgeBase& o) const {
  return name == o.name && concepts == o.concepts && roles == o.roles &&
         assertions == o.assertions;
}

// ── Operations ──────────────────────────────────────────────────────────────

ConceptPtr merged_rhs(const KnowledgeBase& k, const std::string& atom) {
  std::vector<ConceptPtr> parts;
  for (const auto& a : k.assertions)
    if (a.lhs == atom) parts.push_back(a.rhs);
  return ConceptExpr::conj(std::move(parts));
}

KnowledgeBase canonical(const KnowledgeBase& k) {
  KnowledgeBase out;
  out.name = k.name;
  out.concepts = k.concepts;
  out.roles = k.roles;
  std::sort(out.concepts.begin(), out.concepts.end());
  out.concepts.erase(std::unique(out.concepts.begin(), out.concepts.end()),
                     out.concepts.end());
  std::sort(out.roles.begin(), out.roles.end());
  out.roles.erase(std::unique(out.roles.begin(), out.roles.end()),
                  out.roles.end());

  // Sort assertions by (lhs, rendered canonical rhs); drop exact duplicates.
  std::map<std::pair<std::string, std::string>, ConceptPtr> ordered;
  for (const auto& a : k.assertions) {
    ConceptPtr rhs = canonical(a.rhs);
    ordered.emplace(std::make_pair(a.lhs, rhs->render()), rhs);
  }
  for (auto& [key, rhs] : ordered)
    out.assertions.push_back({key.first, rhs});
  return out;
}

KnowledgeBase collapsed(const KnowledgeBase& k) {
  KnowledgeBase merged;
  merged.name = k.name;
  merged.concepts = k.concepts;
  merged.roles = k.roles;
  // Merge same-lhs assertions into one conjunction, in first-seen order.
  std::vector<std::string> seen;
  for (const auto& a : k.assertions) {
    if (std::find(seen.begin(), seen.end(), a.lhs) != seen.end()) continue;
    seen.push_back(a.lhs);
    merged.assertions.push_back({a.lhs, merged_rhs(k, a.lhs)});
  }
  return canonical(merged);
}

std::string render_kb(const KnowledgeBase& k) {
  std::string out;
  for (const auto& a : k.concepts) out += "concept " + a + ";\n";
  for (const auto& p : k.roles) out += "role " + p + ";\n";
  if (!k.concepts.empty() || !k.roles.empty()) out += "\n";
  for (const auto& a : k.assertions)
    out += a.lhs + " <= " + a.rhs->render() + ";\n";
  return out;
}

namespace {

void walk(const ConceptExpr& c,
          const std::function<void(const ConceptExpr&)>& visit) {
  visit(c);
  for (const auto& part : c.parts()) walk(*part, visit);
}

}  // namespace

void for_each_expr(const KnowledgeBase& k,
                   const std::function<void(const ConceptExpr&)>& visit) {
  for (const auto& a : k.assertions) walk(*a.rhs, visit);
}

}  // namespace aluni
