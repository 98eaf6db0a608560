// ============================================================================
//  kb.hpp -- ALUNI knowledge bases: signature plus inclusion assertions
// ============================================================================
//
//  A knowledge base is a triple (concepts, roles, assertions) where every
//  assertion has an atomic left-hand side and an arbitrary concept
//  expression on the right.  Cyclic assertions are permitted; several
//  assertions may share a left-hand side and are then read conjunctively.
//
// ============================================================================

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "aluni/ast.hpp"

namespace aluni {

// ── Assertions ──────────────────────────────────────────────────────────────

/// One inclusion assertion  lhs ⊑ rhs  with atomic lhs.
struct InclusionAssertion {
  std::string lhs;
  ConceptPtr rhs;

  bool operator==(const InclusionAssertion& o) const {
    return lhs == o.lhs && rhs->equals(*o.rhs);
  }
  bool operator!=(const InclusionAssertion& o) const { return !(*this == o); }
};

// ── Knowledge base ──────────────────────────────────────────────────────────

struct KnowledgeBase {
  std::string name;                             ///< optional label
  std::vector<std::string> concepts;            ///< atomic concepts, sorted
  std::vector<std::string> roles;               ///< atomic roles, sorted
  std::vector<InclusionAssertion> assertions;   ///< in declaration order

  bool has_concept(const std::string& a) const;
  bool has_role(const std::string& p) const;

  /// Registers a symbol, keeping the list sorted and duplicate-free.
  void add_concept(const std::string& a);
  void add_role(const std::string& p);

  bool operator==(const KnowledgeBase& o) const;
  bool operator!=(const KnowledgeBase& o) const { return !(*this == o); }
};

// ── Operations ──────────────────────────────────────────────────────────────

/// Conjunction of all right-hand sides asserted for `atom`; ⊤ when none.
ConceptPtr merged_rhs(const KnowledgeBase& k, const std::string& atom);

/// Canonical form: symbols sorted, each right-hand side canonicalized,
/// assertions sorted by (lhs, rendered rhs) with duplicates removed.
KnowledgeBase canonical(const KnowledgeBase& k);

/// Canonical form with same-lhs assertions first merged into a single
/// conjunction per left-hand side ("collapsed" presentation).
KnowledgeBase collapsed(const KnowledgeBase& k);

/// Concrete .kb syntax: declarations first, then one assertion per line.
/// Parsing the result yields a knowledge base equal to the input.
std::string render_kb(const KnowledgeBase& k);

/// Walks every concept expression of every assertion (pre-order).
void for_each_expr(const KnowledgeBase& k,
                   const std::function<void(const ConceptExpr&)>& visit);

}  // namespace aluni
