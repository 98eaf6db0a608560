// ============================================================================
//  interpretation.hpp -- finite interpretations and the semantics evaluator
// ============================================================================
//
//  An interpretation fixes a finite domain {0, …, n−1} and gives every
//  atomic concept a subset and every atomic role a set of ordered pairs.
//  evaluate_concept computes concept extensions by the usual set-theoretic
//  rules; is_model checks every inclusion assertion of a knowledge base.
//
// ============================================================================

#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "aluni/kb.hpp"

namespace aluni {

// ── Interpretation ──────────────────────────────────────────────────────────

struct Interpretation {
  int domain = 0;  ///< individuals are 0 … domain−1
  std::map<std::string, std::set<int>> concepts;
  std::map<std::string, std::set<std::pair<int, int>>> roles;

  bool operator==(const Interpretation& o) const {
    return domain == o.domain && concepts == o.concepts && roles == o.roles;
  }
  bool operator!=(const Interpretation& o) const { return !(*this == o); }

  /// Adds empty extensions for any signature symbol of `k` not yet present.
  void pad_signature(const KnowledgeBase& k);
};

// ── Model checking ──────────────────────────────────────────────────────────

/// One violated assertion together with a single offending individual.
struct Violation {
  std::size_t assertionIndex;  ///< position in KnowledgeBase::assertions
  std::string lhs;
  ConceptPtr rhs;
  int witness;  ///< individual in lhs's extension but not in rhs's
};

struct ModelCheckResult {
  bool ok = false;
  std::vector<Violation> violations;

  explicit operator bool() const { return ok; }
};

/// Extension of `c` under `i` per the set-theoretic rules: ¬A is domain
/// complement, ⊓/⊔ are ∩/∪, ∀R.C collects individuals all of whose
/// R-successors lie in C, ∃≥n/∃≤n count successors, and an inverted role's
/// successors are the predecessors of the base role.
/// Throws SignatureError if `c` mentions a symbol without an extension.
std::set<int> evaluate_concept(const ConceptExpr& c, const Interpretation& i);

/// True iff every assertion A ⊑ C of `k` has A's extension contained in
/// C's.  On failure, reports each violated assertion with one witness.
/// Throws SignatureError if `i` lacks part of `k`'s signature.
ModelCheckResult is_model(const KnowledgeBase& k, const Interpretation& i);

/// Disjoint union: `b`'s individuals are shifted past `a`'s, extensions
/// unioned.  Both inputs must have identical symbol sets.
Interpretation disjoint_union(const Interpretation& a, const Interpretation& b);

// ── Serialization ───────────────────────────────────────────────────────────
//
//  JSON format: {"domain": n, "concepts": {name: [indices…]},
//                "roles": {name: [[i, j]…]}} with sorted keys and lists.

std::string to_json(const Interpretation& i, bool pretty = false);
Interpretation interpretation_from_json(const std::string& text);

}  // namespace aluni
