// ============================================================================
//  cardinality.hpp -- sound cardinality-inequality analyzer
// ============================================================================
//
//  Derives linear facts about concept cardinalities that hold in every
//  finite model of a knowledge base.  The flagship consequence: when A's
//  instances each need at least m R-successors, all inside B, and B's
//  instances admit at most n R-predecessors, then m·#A ≤ n·#B in every
//  finite model — which can force subsumptions that hold in finite models
//  only.  The analyzer is sound and deliberately incomplete: absence of a
//  fact proves nothing.
//
// ============================================================================

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aluni/kb.hpp"

namespace aluni {

// ── Facts ───────────────────────────────────────────────────────────────────

enum class FactKind : std::uint8_t {
  Inequality,         ///< m·#A ≤ n·#B in every finite model
  Subset,             ///< A^I ⊆ B^I in every model
  FiniteSubsumption,  ///< A ⊑ B holds in every finite model
  FiniteInconsistent, ///< A^I = ∅ in every finite model
};

struct CardinalityFact {
  FactKind kind = FactKind::Subset;
  std::string a;       ///< first concept
  std::string b;       ///< second concept; empty for FiniteInconsistent
  long long m = 1;     ///< Inequality coefficient on #a (else 1)
  long long n = 1;     ///< Inequality coefficient on #b (else 1)
  std::string rule;    ///< deriving rule, "R1" … "R6"
  std::vector<std::size_t> derivation;  ///< indices into kb.assertions

  /// Identity ignores rule/derivation: a fact is its mathematical content.
  bool operator==(const CardinalityFact& o) const {
    return kind == o.kind && a == o.a && b == o.b && m == o.m && n == o.n;
  }
  bool operator<(const CardinalityFact& o) const;

  std::string describe() const;  ///< one-line human-readable form
};

/// JSON array of fact objects, e.g.
/// {"kind": "inequality", "m": 1, "a": "Number", "n": 1, "b": "Even",
///  "rule": "R2", "derivation": [0, 1]}.
std::string to_json(const std::vector<CardinalityFact>& facts,
                    bool pretty = false);

// ── Analyzer ────────────────────────────────────────────────────────────────

/// Applies the six derivation rules to fixpoint (chains cut off at path
/// length |concepts|) and returns the facts sorted deterministically:
///
///   R1  A ⊑ … ⊓ B ⊓ …                     ⟹ Subset(A, B)
///   R2  A ⊑ ∃≥m R ⊓ ∀R.B, B ⊑ ∃≤n R⁻      ⟹ Inequality(m, A, n, B)
///   R3  Subset(A, B)                       ⟹ Inequality(1, A, 1, B)
///   R4  Inequality(m,A,n,B) + (m′,B,n′,C)  ⟹ Inequality(m·m′, A, n·n′, C)
///   R5  Subset(A, B) + Inequality(m, B, n, A), n ≤ m
///                                          ⟹ FiniteSubsumption(B, A)
///   R6  Inequality(m, A, n, A), n < m      ⟹ FiniteInconsistent(A)
///
/// Conjuncts are read off the top level of each concept's merged
/// assertions; coefficients are exact integers reduced to lowest terms.
std::vector<CardinalityFact> analyze_cardinalities(const KnowledgeBase& k);

}  // namespace aluni
