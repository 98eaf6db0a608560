#include "aluni/ast.hpp"

#include <cassert>
#include <map>
#include <stdexcept>

namespace aluni {

// ── RoleExpr ────────────────────────────────────────────────────────────────

std::string RoleExpr::render() const {
  return inverted ? "INV " + name : name;
}

// ── Factories ───────────────────────────────────────────────────────────────

ConceptPtr ConceptExpr::make(ConceptKind kind, std::string atom,
                             std::vector<ConceptPtr> parts, RoleExpr role,
                             unsigned bound) {
  auto node = std::shared_ptr<ConceptExpr>(new ConceptExpr());
  node->kind_ = kind;
  node->atom_ = std::move(atom);
  node->parts_ = std::move(parts);
  node->role_ = std::move(role);
  node->bound_ = bound;
  return node;
}

ConceptPtr ConceptExpr::top() {
  static const ConceptPtr instance = make(ConceptKind::Top, {}, {}, {}, 0);
  return instance;
}

ConceptPtr ConceptExpr::bottom() {
  static const ConceptPtr instance = make(ConceptKind::Bottom, {}, {}, {}, 0);
  return instance;
}

ConceptPtr ConceptExpr::atomic(std::string name) {
  return make(ConceptKind::Atomic, std::move(name), {}, {}, 0);
}

ConceptPtr ConceptExpr::neg_atomic(std::string name) {
  return make(ConceptKind::NegAtomic, std::move(name), {}, {}, 0);
}

ConceptPtr ConceptExpr::conj(std::vector<ConceptPtr> parts) {
  if (parts.empty()) return top();
  if (parts.size() == 1) return parts.front();
  return make(ConceptKind::And, {}, std::move(parts), {}, 0);
}

ConceptPtr ConceptExpr::disj(std::vector<ConceptPtr> parts) {
  if (parts.empty())
    throw std::invalid_argument("union requires at least one disjunct");
  if (parts.size() == 1) return parts.front();
  return make(ConceptKind::Or, {}, std::move(parts), {}, 0);
}

ConceptPtr ConceptExpr::forall(RoleExpr role, ConceptPtr body) {
  assert(body != nullptr);
  return make(ConceptKind::Forall, {}, {std::move(body)}, std::move(role), 0);
}

ConceptPtr ConceptExpr::at_least(unsigned n, RoleExpr role) {
  if (n == 0) return top();  // every individual has ≥ 0 successors
  return make(ConceptKind::AtLeast, {}, {}, std::move(role), n);
}

ConceptPtr ConceptExpr::at_most(unsigned n, RoleExpr role) {
  return make(ConceptKind::AtMost, {}, {}, std::move(role), n);
}

ConceptPtr ConceptExpr::exactly(unsigned n, RoleExpr role) {
  return conj({at_least(n, role), at_most(n, role)});
}

ConceptPtr ConceptExpr::some(RoleExpr role) {
  return at_least(1, std::move(role));
}

// ── Equality ────────────────────────────────────────────────────────────────

bool ConceptExpr::equals(const ConceptExpr& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case ConceptKind::Top:
    case ConceptKind::Bottom:
      return true;
    case ConceptKind::Atomic:
    case ConceptKind::NegAtomic:
      return atom_ == other.atom_;
    case ConceptKind::And:
    case ConceptKind::Or: {
      if (parts_.size() != other.parts_.size()) return false;
      for (std::size_t i = 0; i < parts_.size(); ++i)
        if (!parts_[i]->equals(*other.parts_[i])) return false;
      return true;
    }
    case ConceptKind::Forall:
      return role_ == other.role_ && parts_[0]->equals(*other.parts_[0]);
    case ConceptKind::AtLeast:
    case ConceptKind::AtMost:
      return role_ == other.role_ && bound_ == other.bound_;
  }
  return false;  // unreachable
}

// ── Rendering ───────────────────────────────────────────────────────────────
//
// Precedence levels for parenthesization:
//   0 = Or context, 1 = And context, 2 = prefix-operand context.
// An Or child needs parentheses at level ≥ 1; an And child at level ≥ 2.
// Prefix constructs (ALL/ATLEAST/ATMOST/NOT) and leaves never need them.

namespace {
constexpr int kLevelOr = 0;
constexpr int kLevelAnd = 1;
constexpr int kLevelPrefix = 2;
}  // namespace

void ConceptExpr::render_to(std::string& out, int parent_level) const {
  switch (kind_) {
    case ConceptKind::Top:
      out += "TOP";
      return;
    case ConceptKind::Bottom:
      out += "BOTTOM";
      return;
    case ConceptKind::Atomic:
      out += atom_;
      return;
    case ConceptKind::NegAtomic:
      out += "NOT ";
      out += atom_;
      return;
    case ConceptKind::And: {
      const bool parens = parent_level >= kLevelPrefix;
      if (parens) out += '(';
      for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) out += " AND ";
        parts_[i]->render_to(out, kLevelAnd);
      }
      if (parens) out += ')';
      return;
    }
    case ConceptKind::Or: {
      const bool parens = parent_level >= kLevelAnd;
      if (parens) out += '(';
      for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) out += " OR ";
        parts_[i]->render_to(out, kLevelOr);
      }
      if (parens) out += ')';
      return;
    }
    case ConceptKind::Forall:
      out += "ALL ";
      out += role_.render();
      out += '.';
      parts_[0]->render_to(out, kLevelPrefix);
      return;
    case ConceptKind::AtLeast:
      out += "ATLEAST ";
      out += std::to_string(bound_);
      out += ' ';
      out += role_.render();
      return;
    case ConceptKind::AtMost:
      out += "ATMOST ";
      out += std::to_string(bound_);
      out += ' ';
      out += role_.render();
      return;
  }
}

std::string ConceptExpr::render() const {
  std::string out;
  render_to(out, kLevelOr);
  return out;
}

// ── Canonical form ──────────────────────────────────────────────────────────

ConceptPtr canonical(const ConceptPtr& c) {
  switch (c->kind()) {
    case ConceptKind::And:
    case ConceptKind::Or: {
      const bool isAnd = c->kind() == ConceptKind::And;
      // Canonicalize children, flattening same-kind nests.
      std::vector<ConceptPtr> flat;
      for (const auto& part : c->parts()) {
        ConceptPtr p = canonical(part);
        if (p->kind() == c->kind()) {
          flat.insert(flat.end(), p->parts().begin(), p->parts().end());
        } else {
          flat.push_back(std::move(p));
        }
      }
      // Sort by rendering and drop duplicates (⊓/⊔ are ACI).
      std::map<std::string, ConceptPtr> ordered;
      for (auto& p : flat) ordered.emplace(p->render(), p);
      std::vector<ConceptPtr> parts;
      parts.reserve(ordered.size());
      for (auto& [text, p] : ordered) parts.push_back(p);
      return isAnd ? ConceptExpr::conj(std::move(parts))
                   : ConceptExpr::disj(std::move(parts));
    }
    case ConceptKind::Forall: {
      ConceptPtr body = canonical(c->body());
      if (body == c->body()) return c;
      return ConceptExpr::forall(c->role(), std::move(body));
    }
    default:
      return c;  // leaves and number restrictions are already canonical
  }
}

}  // namespace aluni
