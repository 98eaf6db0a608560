// ============================================================================
//  oo.hpp -- object-oriented schemas: types, values, ψ, unfolding, α/β
// ============================================================================
//
//  An object-oriented schema declares classes, each with optional
//  super-classes and exactly one structural type built from class
//  references, unions, set types and record types.  Instances populate
//  classes with object identifiers and assign every identifier a value
//  (an oid, a finite set, or a finite record).
//
//  ψ compiles a schema to a knowledge base over three reserved atoms
//  (AbstractClass, RecType, SetType) and two reserved roles (value,
//  member): objects carry exactly one value, structured values carry
//  none.  ψ needs neither inverse roles nor number restrictions beyond
//  the value 1.
//
//  The compiled knowledge base can have finite models with cycles among
//  structured values that no instance can realize (values are finite
//  trees).  Such cycles — touching only RecType/SetType instances and
//  never a value edge — are "bad"; m-unfolding expands them into trees
//  truncated at depth m, after which β folds individuals back into an
//  instance.  α embeds an instance into a model, one individual per
//  active value.
//
// ============================================================================

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "aluni/kb.hpp"
#include "aluni/reason.hpp"

namespace aluni {

// ── Structural types ────────────────────────────────────────────────────────

class TypeExpr;
using TypePtr = std::shared_ptr<const TypeExpr>;

/// A structural type: class reference, union of types, set type, or
/// record type with labeled components.  Immutable; build via factories.
class TypeExpr {
public:
  enum class Kind : std::uint8_t { ClassRef, Union, SetOf, Record };

  static TypePtr class_ref(std::string name);
  /// Union of ≥ 1 branches; a 1-ary union collapses to its branch.
  static TypePtr union_of(std::vector<TypePtr> branches);
  static TypePtr set_of(TypePtr element);
  /// Record with ≥ 1 components; labels and types run in parallel and
  /// labels must be distinct.  Components are stored sorted by label.
  static TypePtr record(std::vector<std::string> labels,
                        std::vector<TypePtr> types);

  Kind kind() const { return kind_; }
  /// ClassRef only.
  const std::string& class_name() const { return name_; }
  /// Union branches, the SetOf element (singleton), or record component
  /// types (parallel to labels()).
  const std::vector<TypePtr>& parts() const { return parts_; }
  /// Record labels, sorted ascending.
  const std::vector<std::string>& labels() const { return labels_; }

  bool equals(const TypeExpr& other) const;
  /// Concrete syntax: `Union T1, T2 End`, `Set-of T`,
  /// `Record a: T, b: U End`, or a bare class name.
  std::string render() const;

private:
  TypeExpr() = default;

  Kind kind_ = Kind::ClassRef;
  std::string name_;
  std::vector<TypePtr> parts_;
  std::vector<std::string> labels_;
};

// ── Schemas ─────────────────────────────────────────────────────────────────

/// One class declaration: super-classes (possibly none) and the
/// structural type of the class's values.
struct OODeclaration {
  std::vector<std::string> supers;
  TypePtr type;
};

/// Parsed schema.  classNames covers every class that appears anywhere;
/// classes without a declaration are opaque: they contribute an atom to
/// ψ but no assertion, and instances may populate them freely.
struct OOSchema {
  std::set<std::string> classNames;
  std::set<std::string> attrNames;  ///< record labels used by declared types
  std::map<std::string, OODeclaration> decls;

  bool is_opaque(const std::string& c) const {
    return classNames.count(c) != 0 && decls.count(c) == 0;
  }
};

// ── Values and instances ────────────────────────────────────────────────────

/// A value: an object identifier, a finite set of values, or a finite
/// record mapping labels to values.  Sets and records compare
/// structurally; oids compare by name.  Immutable.
class Value {
public:
  enum class Kind : std::uint8_t { Oid, Set, Rec };

  static Value oid(std::string name);
  /// Builds a set value; elements are sorted and deduplicated.
  static Value set_val(std::vector<Value> elements);
  /// Builds a record value; labels and values run in parallel, labels
  /// must be distinct, components are stored sorted by label.
  static Value rec_val(std::vector<std::string> labels,
                       std::vector<Value> values);

  Kind kind() const { return kind_; }
  const std::string& oid_name() const { return name_; }
  /// Set elements (sorted) or record component values (parallel to
  /// labels()).
  const std::vector<Value>& children() const { return children_; }
  /// Record labels, sorted ascending.
  const std::vector<std::string>& labels() const { return labels_; }
  /// Record lookup; nullptr when the label is absent.
  const Value* field(const std::string& label) const;

  bool operator==(const Value& other) const;
  bool operator!=(const Value& other) const { return !(*this == other); }
  /// Total order: oids before sets before records, then lexicographic.
  bool operator<(const Value& other) const;

  /// Concrete shape for reports: `o1`, `{v1, v2}`, `[a: v, b: w]`.
  std::string render() const;

private:
  Value() = default;

  Kind kind_ = Kind::Oid;
  std::string name_;
  std::vector<Value> children_;
  std::vector<std::string> labels_;
};

/// An instance: a finite oid set, class extensions over those oids, and
/// a total assignment of one value per oid.
struct OOInstance {
  std::set<std::string> oids;
  std::map<std::string, std::set<std::string>> pi;
  std::map<std::string, Value> rho;

  bool operator==(const OOInstance& other) const {
    return oids == other.oids && pi == other.pi && rho == other.rho;
  }
  bool operator!=(const OOInstance& other) const { return !(*this == other); }
};

/// Violation report for instance legality.
struct InstanceReport {
  bool ok = false;
  std::vector<std::string> violations;
  explicit operator bool() const { return ok; }
};

/// A cycle in a model touching only structured-value individuals and no
/// value edge.  Reported per strongly connected component: `members`
/// lists the individuals (ascending) and `edges` the internal non-value
/// role edges witnessing the cycles.
struct CycleEdge {
  int from = 0;
  std::string role;
  int to = 0;

  bool operator==(const CycleEdge& other) const {
    return from == other.from && role == other.role && to == other.to;
  }
  bool operator<(const CycleEdge& other) const {
    if (from != other.from) return from < other.from;
    if (role != other.role) return role < other.role;
    return to < other.to;
  }
};

struct BadCycle {
  std::vector<int> members;      ///< ascending
  std::vector<CycleEdge> edges;  ///< sorted
};

/// β result; `notes` records the deterministic repairs applied where the
/// input interpretation was not actually a model (fallback values,
/// dropped memberships, arbitrary filler choices).
struct OOBetaResult {
  OOInstance instance;
  std::vector<std::string> notes;
};

// ── Operations ──────────────────────────────────────────────────────────────

/// Reads the .oos format, one declaration per class:
///   Class C [is-a C1, …] type-is T
///   T := C | Union T1, …, Tk End | Set-of T | Record a1: T1, …, ak: Tk End
/// Names referenced but never declared become opaque classes.  Rejects
/// duplicate declarations, empty records, duplicate record labels, and
/// the reserved names AbstractClass/RecType/SetType (classes) and
/// value/member (labels).
OOSchema parse_oo(const std::string& text);

/// Serializes back to the .oos format, one line per declaration in name
/// order.  parse_oo ∘ render_oo is the identity on parsed schemas.
std::string render_oo(const OOSchema& s);

/// Parses a standalone structural type in the .oos type grammar.
TypePtr parse_type_expr(const std::string& text);

/// Nesting depth: class references are flat, unions take the deepest
/// branch, set and record types add one level.
unsigned type_depth(const TypeExpr& t);

/// Maximum depth over all declared types; 0 for a schema with no
/// declarations.
unsigned schema_depth(const OOSchema& s);

/// The active values of an instance: one oid value per identifier plus
/// every value reachable from an assigned value.  Throws SignatureError
/// when ρ is not a total map on exactly the oid set or π mentions
/// unknown identifiers.
std::set<Value> active_values(const OOInstance& j);

/// Structural typing: oids belong to a class reference via π, unions
/// accept any branch, set values need every element in the element type
/// (the empty set always qualifies), and records need every declared
/// component — extra components are permitted.
bool type_member(const TypeExpr& t, const Value& v, const OOInstance& j);

/// Legality: per declaration, every instance of the class lies in every
/// super-class and its assigned value belongs to the declared type.
InstanceReport check_legal_instance(const OOSchema& s, const OOInstance& j);

/// ψ on types: class references become atoms, unions disjunctions, a set
/// type becomes SetType ⊓ ∀member.ψ(T), a record type becomes RecType ⊓
/// ⊓_i (∀a_i.ψ(T_i) ⊓ ∃=1 a_i).
ConceptPtr psi_type(const TypeExpr& t);

/// Compiles a schema: atoms {AbstractClass, RecType, SetType} ∪ classes,
/// roles {value, member} ∪ record labels; the three fixed assertions
///   AbstractClass ⊑ ∃=1 value
///   RecType      ⊑ ∀value.⊥
///   SetType      ⊑ ∀value.⊥ ⊓ ¬RecType
/// and, per declaration,
///   C ⊑ AbstractClass ⊓ C1 ⊓ … ⊓ Cn ⊓ ∀value.ψ(T).
/// Opaque classes contribute no assertion.  The output uses no inverse
/// roles and no number bound other than 1.
KnowledgeBase translate_psi(const OOSchema& s);

/// Finds the cycles no instance can realize: strongly connected
/// components, restricted to RecType/SetType instances and non-value
/// edges, that contain at least one edge.  Ordered by least member.
/// Throws SignatureError when i lacks part of ψ(s)'s signature.
std::vector<BadCycle> find_bad_cycles(const OOSchema& s,
                                      const Interpretation& i);

/// The m-unfolded interpretation: every bad-cycle member becomes the
/// root of a tree of fresh copies, duplicating only RecType/SetType
/// instances and truncating at depth m.  Roots keep their incoming
/// edges; copies inherit concept memberships except AbstractClass;
/// edges to unduplicated individuals are preserved at every depth.  The
/// result has no bad cycles and exactly as many AbstractClass instances
/// as the input.
Interpretation unfold(const OOSchema& s, const Interpretation& i, unsigned m);

/// Embeds an instance into an interpretation with one individual per
/// active value (sorted: oids, then sets, then records).  AbstractClass
/// holds the oid images, RecType/SetType the record/set images; value
/// edges follow ρ, member edges the set structure, and one role per
/// record label follows the record structure.  Legal instances yield
/// finite models of ψ(s).
Interpretation alpha_oo(const OOSchema& s, const OOInstance& j);

/// Folds an interpretation back into an instance.  Internally unfolds at
/// m = schema_depth(s) first, then reads oids off AbstractClass (and any
/// class atom), record values off non-value role successors, and set
/// values off member successors.  On models whose class atoms hold only
/// AbstractClass instances the result is legal and the notes are empty;
/// otherwise deterministic fallbacks apply (least-index filler, empty
/// set for a missing value, object treatment for class members outside
/// AbstractClass) and each is noted.
OOBetaResult beta_oo(const OOSchema& s, const Interpretation& i);

/// Renames oids throughout an instance: the oid set, π members, ρ keys,
/// and oid values nested inside assigned values.  Names absent from the
/// map stay put.
OOInstance rename_oids(const OOInstance& j,
                       const std::map<std::string, std::string>& renaming);

/// Canonical shape of a structurally valid instance: oids renamed to
/// "o<rank>" by ascending name rank and every schema class present in π.
/// β ∘ α maps an instance to exactly this canonical form.
OOInstance canonical_instance(const OOSchema& s, const OOInstance& j);

/// Bounded model search for ψ(T) against ψ(s).  Throws SignatureError
/// when T mentions names outside the schema.
ReasoningVerdict oo_type_consistent(const OOSchema& s, const TypePtr& t,
                                    const SearchBudget& budget);

/// Bounded counterexample search for ψ(T) ⊑ ψ(T′) against ψ(s): a
/// witness refutes the subtype relation in the explored sizes.
ReasoningVerdict oo_subtype(const OOSchema& s, const TypePtr& t,
                            const TypePtr& tPrime, const SearchBudget& budget);

// ── Serialization ───────────────────────────────────────────────────────────

/// Instance JSON: {"oids": […], "pi": {class: […]}, "rho": {oid: value}}
/// with values tagged {"oid": name} | {"set": […]} | {"rec": {label: …}}.
std::string to_json(const OOInstance& j, bool pretty = false);

/// Inverse of to_json; throws ParseError on malformed input.
OOInstance instance_from_json(const std::string& text);

}  // namespace aluni
