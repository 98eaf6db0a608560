// ============================================================================
//  reason.hpp -- bounded finite-model search
// ============================================================================
//
//  find_model looks for a finite model of a knowledge base in which a goal
//  concept has a nonempty extension, trying each domain size from
//  minSize up to maxSize.  The search is complete per size: NoModelUpTo(n)
//  means no interpretation of any size ≤ n works.  Because the language
//  lacks the finite model property, a negative answer is always a bounded
//  statement, never an unrestricted one.
//
//  subsumption_counterexample searches for a model where some individual
//  falls under c1 but not under c2, refuting "c1 subsumed by c2" both
//  finitely and unrestrictedly when found (a finite model is a model).
//
// ============================================================================

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "aluni/interpretation.hpp"
#include "aluni/kb.hpp"

namespace aluni {

// ── Budget ──────────────────────────────────────────────────────────────────

struct SearchBudget {
  int minSize = 1;         ///< smallest domain size to try (≥ 1)
  int maxSize = 8;         ///< largest domain size to try (≤ 64)
  double timeLimit = 30.0; ///< wall-clock seconds for the whole call

  /// Throws std::invalid_argument when the bounds are out of range.
  void validate() const;
};

// ── Verdict ─────────────────────────────────────────────────────────────────

enum class Outcome : std::uint8_t {
  WitnessFound, ///< witness interpretation attached
  NoModelUpTo,  ///< exhausted every size ≤ bound
  TimedOut,     ///< bound = last size fully completed (0 if none)
};

struct ReasoningVerdict {
  Outcome outcome = Outcome::NoModelUpTo;
  int bound = 0;  ///< NoModelUpTo: max size searched; TimedOut: last done
  std::optional<Interpretation> witness;  ///< set iff WitnessFound

  bool found() const { return outcome == Outcome::WitnessFound; }

  bool operator==(const ReasoningVerdict& o) const {
    return outcome == o.outcome && bound == o.bound && witness == o.witness;
  }
};

/// JSON: {"outcome": "witness-found"|"no-model-up-to"|"timed-out",
///        "bound": n, "witness": <interpretation or null>}.
std::string to_json(const ReasoningVerdict& v, bool pretty = false);

// ── Search ──────────────────────────────────────────────────────────────────

/// Finds a model of `k` with `goal` nonempty, deterministically returning
/// the lexicographically first witness at the smallest feasible size.
/// Individual 0 always realizes the goal (symmetry breaking; permuting any
/// model moves a goal element to index 0, so completeness is unaffected).
ReasoningVerdict find_model(const KnowledgeBase& k, const ConceptPtr& goal,
                            const SearchBudget& budget);

/// Searches for a model with an individual in c1 but not in c2.
/// WitnessFound refutes the subsumption; NoModelUpTo(n) is evidence for it
/// up to the bound.
ReasoningVerdict subsumption_counterexample(const KnowledgeBase& k,
                                            const ConceptPtr& c1,
                                            const ConceptPtr& c2,
                                            const SearchBudget& budget);

}  // namespace aluni
