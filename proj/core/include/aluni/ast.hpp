// ============================================================================
//  ast.hpp -- abstract syntax of ALUNI concept and role expressions
// ============================================================================
//
//  The language has atomic concepts, atomic negation, intersection, union,
//  value restriction over a role, and the two number restrictions, with
//  roles being either an atomic role P or its inverse P⁻.  TOP and BOTTOM
//  are kept as first-class leaves; they desugar to A ⊔ ¬A and A ⊓ ¬A only
//  when a purely primitive form is explicitly requested.
//
//  Expressions are immutable value objects handled through shared_ptr<const>
//  handles; all operations on them are pure.
//
// ============================================================================

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace aluni {

// ── Roles ───────────────────────────────────────────────────────────────────

/// An atomic role P or its inverse P⁻.  Inverses never nest: applying
/// `inverse()` twice yields the original atomic role.
struct RoleExpr {
  std::string name;      ///< atomic role identifier
  bool inverted = false; ///< true for P⁻

  RoleExpr() = default;
  explicit RoleExpr(std::string n, bool inv = false)
      : name(std::move(n)), inverted(inv) {}

  /// The converse role: P ↦ P⁻, P⁻ ↦ P.
  RoleExpr inverse() const { return RoleExpr(name, !inverted); }

  bool operator==(const RoleExpr& o) const {
    return name == o.name && inverted == o.inverted;
  }
  bool operator!=(const RoleExpr& o) const { return !(*this == o); }
  bool operator<(const RoleExpr& o) const {
    if (name != o.name) return name < o.name;
    return inverted < o.inverted;
  }

  /// Concrete syntax: `P` or `INV P`.
  std::string render() const;
};

// ── Concepts ────────────────────────────────────────────────────────────────

enum class ConceptKind : std::uint8_t {
  Top,       ///< ⊤ (whole domain)
  Bottom,    ///< ⊥ (empty set)
  Atomic,    ///< A
  NegAtomic, ///< ¬A
  And,       ///< C1 ⊓ … ⊓ Ck, k ≥ 2
  Or,        ///< C1 ⊔ … ⊔ Ck, k ≥ 2
  Forall,    ///< ∀R.C
  AtLeast,   ///< ∃≥n R
  AtMost,    ///< ∃≤n R
};

class ConceptExpr;

/// Shared immutable handle; the only way expressions are passed around.
using ConceptPtr = std::shared_ptr<const ConceptExpr>;

/// Immutable concept-expression node.  Construct through the static factory
/// functions only; they normalize degenerate arities (0-ary ⊓ is ⊤, 1-ary
/// ⊓/⊔ collapse to the child, ∃≥0 R is ⊤).
class ConceptExpr {
public:
  // ── Factories ─────────────────────────────────────────────────────────
  static ConceptPtr top();
  static ConceptPtr bottom();
  static ConceptPtr atomic(std::string name);
  static ConceptPtr neg_atomic(std::string name);
  /// k-ary intersection; empty ↦ ⊤, singleton ↦ the part.
  static ConceptPtr conj(std::vector<ConceptPtr> parts);
  /// k-ary union; singleton ↦ the part (0-ary is rejected).
  static ConceptPtr disj(std::vector<ConceptPtr> parts);
  static ConceptPtr forall(RoleExpr role, ConceptPtr body);
  /// ∃≥n R; n = 0 normalizes to ⊤.
  static ConceptPtr at_least(unsigned n, RoleExpr role);
  /// ∃≤n R; n = 0 is kept (it means "no R-successor").
  static ConceptPtr at_most(unsigned n, RoleExpr role);
  /// Sugar ∃=n R ↦ ∃≥n R ⊓ ∃≤n R.
  static ConceptPtr exactly(unsigned n, RoleExpr role);
  /// Sugar ∃R ↦ ∃≥1 R.
  static ConceptPtr some(RoleExpr role);

  // ── Accessors (valid only for the matching kind) ──────────────────────
  ConceptKind kind() const { return kind_; }
  const std::string& atom_name() const { return atom_; }
  const std::vector<ConceptPtr>& parts() const { return parts_; }
  const RoleExpr& role() const { return role_; }
  const ConceptPtr& body() const { return parts_.front(); }
  unsigned bound() const { return bound_; }

  // ── Operations ────────────────────────────────────────────────────────

  /// Deep structural equality.
  bool equals(const ConceptExpr& other) const;

  /// Concrete syntax in the .kb grammar (re-parses to an equal expression).
  std::string render() const;

private:
  ConceptExpr() = default;

  static ConceptPtr make(ConceptKind kind, std::string atom,
                         std::vector<ConceptPtr> parts, RoleExpr role,
                         unsigned bound);

  ConceptKind kind_ = ConceptKind::Top;
  std::string atom_;              // Atomic / NegAtomic
  std::vector<ConceptPtr> parts_; // And / Or children; Forall body at [0]
  RoleExpr role_;                 // Forall / AtLeast / AtMost
  unsigned bound_ = 0;            // AtLeast / AtMost

  /// Appended inside render() with the precedence of the enclosing context.
  void render_to(std::string& out, int parent_level) const;
};

inline bool operator==(const ConceptExpr& a, const ConceptExpr& b) {
  return a.equals(b);
}
inline bool operator!=(const ConceptExpr& a, const ConceptExpr& b) {
  return !a.equals(b);
}

// ── Canonical form ──────────────────────────────────────────────────────────

/// Canonicalizes an expression: ⊓/⊔ nests are flattened, children sorted by
/// their rendering, duplicates removed, and single-child nodes collapsed.
/// Idempotent; used to compare translations order-insensitively.
ConceptPtr canonical(const ConceptPtr& c);

}  // namespace aluni
