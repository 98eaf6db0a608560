// ============================================================================
//  er.hpp -- Entity-Relationship schemas and the φ compilation
// ============================================================================
//
//  An ER schema declares entities (with attributes over basic domains and
//  isa links), n-ary relationships whose named roles each belong to exactly
//  one relationship, and min/max cardinality bounds on entity participation.
//  φ compiles a schema to a knowledge base by reifying relationships: each
//  tuple becomes an individual with one functional role per position, and
//  participation bounds become number restrictions over inverse roles.
//
//  The module also carries the model↔state machinery: α builds an
//  interpretation from a database state, β folds a finite
//  relation-descriptive model back into a state, and the copy-and-exchange
//  construction repairs models in which distinct tuple individuals collide
//  on all role fillers.
//
// ============================================================================

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "aluni/cardinality.hpp"
#include "aluni/interpretation.hpp"
#include "aluni/kb.hpp"
#include "aluni/reason.hpp"

namespace aluni {

// ── Schema ──────────────────────────────────────────────────────────────────

struct ERSchema {
  /// Participation bounds; absent max means unbounded (∞).
  struct Card {
    unsigned min = 0;
    std::optional<unsigned> max;
  };

  std::set<std::string> entities;
  std::set<std::string> attributes;
  std::set<std::string> roles;
  std::set<std::string> relationships;
  std::set<std::string> domains;

  std::set<std::pair<std::string, std::string>> isa;  ///< (sub, super)

  /// entity → declared [attribute : domain] tuple, in declaration order.
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> att;

  /// relationship → declared [role : primary entity] tuple, arity ≥ 2.
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> rel;

  /// (entity, relationship, role) → bounds.
  std::map<std::tuple<std::string, std::string, std::string>, Card> card;

  /// Reflexive-transitive isa: does sub ≼* super hold?
  bool isa_star(const std::string& sub, const std::string& super) const;

  /// The relationship a role belongs to (roles are relationship-specific).
  const std::string& role_owner(const std::string& role) const;
};

// ── States ──────────────────────────────────────────────────────────────────

/// A total assignment of one individual per role of some relationship.
struct LabeledTuple {
  std::map<std::string, int> assignments;

  bool operator==(const LabeledTuple& o) const {
    return assignments == o.assignments;
  }
  bool operator<(const LabeledTuple& o) const {
    return assignments < o.assignments;
  }
};

/// A finite database state.  Individuals are integers; basic-domain values
/// are tagged strings "DomainName#k" and live outside the individual set.
struct DatabaseState {
  std::set<int> domain;  ///< Δ^B, nonempty for legal states
  std::map<std::string, std::set<int>> entityExt;
  std::map<std::string, std::set<std::pair<int, std::string>>> attrExt;
  std::map<std::string, std::set<LabeledTuple>> relExt;

  bool operator==(const DatabaseState& o) const {
    return domain == o.domain && entityExt == o.entityExt &&
           attrExt == o.attrExt && relExt == o.relExt;
  }
};

std::string to_json(const DatabaseState& b, bool pretty = false);
DatabaseState state_from_json(const std::string& text);

// ── Reports ─────────────────────────────────────────────────────────────────

struct LegalityReport {
  bool ok = false;
  std::vector<std::string> violations;
  explicit operator bool() const { return ok; }
};

/// Conflicting tuple individuals: members of one relationship concept
/// agreeing on every role-successor set.
struct ConflictSet {
  std::string relationship;
  std::vector<int> members;  ///< ≥ 2, ascending
};

struct DescriptivenessReport {
  bool ok = false;
  std::vector<ConflictSet> conflicts;
  explicit operator bool() const { return ok; }
};

/// β result; `notes` records deterministic repairs applied where the input
/// interpretation was not actually a model (dropped dangling pairs etc.).
struct BetaResult {
  DatabaseState state;
  std::vector<std::string> notes;
};

/// Inheritance answer: sound positive evidence from the cardinality
/// analyzer alongside a bounded counterexample search.
struct InheritanceAnswer {
  bool proven = false;  ///< analyzer derives the inclusion (finite models)
  ReasoningVerdict counterexample;  ///< WitnessFound refutes the inclusion
  std::vector<CardinalityFact> facts;
};

// ── Operations ──────────────────────────────────────────────────────────────

/// Reads the .ers format:
///   entity E [isa E1, …] [attrs A1: D1, …];
///   relationship R (U1: E1, …, Uk: Ek);        # k ≥ 2
///   card E in R.U min..max;                     # `*` for unbounded max
/// Rejects role reuse across relationships, cardinalities on non-sub-entities
/// of a role's primary entity, and name collisions across alphabets.
ERSchema parse_er(const std::string& text);

std::string render_er(const ERSchema& s);

/// φ: concepts = entities ∪ relationships ∪ domains, roles = attributes ∪
/// ER-roles, with assertions (1) isa inclusions, (2) attribute typing and
/// functionality, (3) reified-tuple typing and functionality, (4) role
/// closure E ⊑ ∀U⁻.R, (5)/(6) participation bounds over U⁻, and (7) the
/// pairwise disjointness block for relationships and domains, elidable for
/// display.
KnowledgeBase translate_phi(const ERSchema& s, bool elideDisjointness = false);

/// Checks the four legality conditions: isa containment, exactly-one typed
/// attribute value, tuples typed by primary entities, and participation
/// counts within declared bounds for every sub-entity instance.
LegalityReport check_legal(const ERSchema& s, const DatabaseState& b);

/// α: interpretation over φ(s)'s signature whose domain is the state's
/// individuals, then its active basic values, then one fresh individual per
/// relationship tuple; extensions copy the state, tuple individuals get one
/// role edge per position.  Legal states yield models.
Interpretation alpha_er(const ERSchema& s, const DatabaseState& b);

/// Condition (8): no two distinct instances of one relationship concept may
/// share all role-successor sets.
DescriptivenessReport is_relation_descriptive(const ERSchema& s,
                                              const Interpretation& i);

/// Repairs conflicts per relationship by taking 2^c disjoint copies of the
/// model (c = conflict individuals beyond one representative per set) and
/// exchanging last-role successors between adjacent copies.  Preserves
/// modelhood and keeps `witness` nonempty; throws BlowupError if the copy
/// count would exceed the memory guard.
Interpretation make_relation_descriptive(const ERSchema& s,
                                         const Interpretation& i,
                                         const ConceptPtr& witness);

/// β: entity individuals keep their identity, relationship individuals
/// collapse to labeled tuples of their role fillers, domain individuals
/// enumerate injectively into "D#k" values.  On models the result is legal.
BetaResult beta_er(const ERSchema& s, const Interpretation& i);

/// Canonical shape of a structurally valid state: individuals renamed to
/// 0…n−1 by rank, each domain's active values re-enumerated by rank, and
/// every schema symbol present (empty where unpopulated).  β ∘ α maps a
/// state to exactly this canonical form.
DatabaseState canonical_state(const ERSchema& s, const DatabaseState& b);

/// Bounded satisfiability of an entity: find_model over φ(s).
ReasoningVerdict er_entity_satisfiable(const ERSchema& s,
                                       const std::string& entity,
                                       const SearchBudget& budget);

/// Does `sub` inherit from `super` (sub ⊑ super in all legal finite
/// states)?  `proven` is sound; a WitnessFound counterexample refutes.
InheritanceAnswer er_inherits(const ERSchema& s, const std::string& sub,
                              const std::string& super,
                              const SearchBudget& budget);

}  // namespace aluni
