// ============================================================================
//  frames.hpp -- frame knowledge bases and the θ compilation
// ============================================================================
//
//  A frame knowledge base is a list of frame definitions, each naming
//  optional super-frames and member slots; a slot constrains its fillers
//  by a value class (a boolean combination of frame names) and optional
//  min/max cardinalities.  θ compiles every frame to an atomic concept,
//  every slot to an atomic role, and every definition body to one
//  inclusion assertion; reasoning services route through the translated
//  knowledge base.  θ emits no inverse roles, so the translation target
//  enjoys the finite model property: a found witness certifies
//  unrestricted consistency, not just finite consistency.
//
// ============================================================================

#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aluni/kb.hpp"
#include "aluni/reason.hpp"

namespace aluni {

// ── Slot constraints ────────────────────────────────────────────────────────

struct SlotConstraint;
using SlotConstraintPtr = std::shared_ptr<const SlotConstraint>;

/// Value-class expression: a frame name, or a binary UNION/INTERSECTION,
/// or a NOT, per the concrete grammar.
struct SlotConstraint {
  enum class Kind : std::uint8_t { FrameRef, Intersection, Union, Not };

  Kind kind = Kind::FrameRef;
  std::string frame;                ///< FrameRef payload
  SlotConstraintPtr left, right;    ///< binary children; Not uses left only

  static SlotConstraintPtr ref(std::string name);
  static SlotConstraintPtr intersection(SlotConstraintPtr l,
                                        SlotConstraintPtr r);
  static SlotConstraintPtr union_of(SlotConstraintPtr l, SlotConstraintPtr r);
  static SlotConstraintPtr negation(SlotConstraintPtr h);

  /// Concrete syntax, e.g. "(INTERSECTION GradStudent (NOT Undergrad))".
  std::string render() const;
};

// ── Frames ──────────────────────────────────────────────────────────────────

struct SlotSpec {
  std::string slot;
  SlotConstraintPtr valueClass;
  std::optional<unsigned> minCard;  ///< positive when present
  std::optional<unsigned> maxCard;  ///< positive when present
};

/// The anonymous body of a frame: super-frame names plus slots.  Queries
/// about "is this frame more general than that description" take one of
/// these as the description.
struct FrameExpr {
  std::vector<std::string> supers;
  std::vector<SlotSpec> slots;

  bool empty() const { return supers.empty() && slots.empty(); }
};

struct FrameDefinition {
  std::string name;
  FrameExpr body;
};

struct FrameKB {
  std::string kbName;                   ///< the "in KB …" label
  std::vector<FrameDefinition> frames;  ///< in definition order
  std::set<std::string> frameNames;     ///< defined ∪ referenced names
  std::set<std::string> slotNames;
};

// ── Operations ──────────────────────────────────────────────────────────────

/// Reads the .frm format (see render_frames for the layout).  Names that
/// are referenced but never defined (e.g. a value class of primitive data)
/// still enter frameNames; they translate to unconstrained atoms.
/// Errors: syntax, duplicate frame definition, duplicate slot in one frame,
/// zero cardinalities.
FrameKB parse_frames(const std::string& text);

/// Concrete .frm text; parsing it back yields an equal FrameKB.
std::string render_frames(const FrameKB& f);

/// Parses a frame body ("SuperClasses: … MemberSlot: …") on its own.
FrameExpr parse_frame_expr(const std::string& text);

/// θ: one atomic concept per frame name, one atomic role per slot, and per
/// nonempty definition body one assertion
///   F ⊑ super1 ⊓ … ⊓ ∀S.θ(H) [⊓ ∃≥m S] [⊓ ∃≤n S] ⊓ …
/// where θ maps value classes homomorphically (NOT is pushed down to
/// atomic negations).  Empty bodies produce no assertion.
KnowledgeBase translate_theta(const FrameKB& f);

/// θ of a value-class expression (public for goal construction).
ConceptPtr theta_constraint(const SlotConstraint& h);

/// θ of a frame body; ⊤ when empty.
ConceptPtr theta_expr(const FrameExpr& e);

/// Bounded consistency of a declared frame: find_model over θ(f) with the
/// frame's atom as goal.
ReasoningVerdict frame_consistent(const FrameKB& f, const std::string& frame,
                                  const SearchBudget& budget);

/// Is the description `e` more general than `frame`?  Searches for a
/// counterexample model with an individual in θ(frame) ∖ θ(e);
/// NoModelUpTo supports the subsumption up to the bound.
ReasoningVerdict frame_more_general(const FrameKB& f, const std::string& frame,
                                    const FrameExpr& e,
                                    const SearchBudget& budget);

}  // namespace aluni
