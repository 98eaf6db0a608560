#include "aluni/frames.hpp"

#include <algorithm>
#include <array>

#include "aluni/diagnostics.hpp"
#include "lexer.hpp"

namespace aluni {

// ── SlotConstraint ──────────────────────────────────────────────────────────

SlotConstraintPtr SlotConstraint::ref(std::string name) {
  auto h = std::make_shared<SlotConstraint>();
  h->kind = Kind::FrameRef;
  h->frame = std::move(name);
  return h;
}

SlotConstraintPtr SlotConstraint::intersection(SlotConstraintPtr l,
                                               SlotConstraintPtr r) {
  auto h = std::make_shared<SlotConstraint>();
  h->kind = Kind::Intersection;
  h->left = std::move(l);
  h->right = std::move(r);
  return h;
}

SlotConstraintPtr SlotConstraint::union_of(SlotConstraintPtr l,
                                           SlotConstraintPtr r) {
  auto h = std::make_shared<SlotConstraint>();
  h->kind = Kind::Union;
  h->left = std::move(l);
  h->right = std::move(r);
  return h;
}

SlotConstraintPtr SlotConstraint::negation(SlotConstraintPtr inner) {
  auto h = std::make_shared<SlotConstraint>();
  h->kind = Kind::Not;
  h->left = std::move(inner);
  return h;
}

std::string SlotConstraint::render() const {
  switch (kind) {
    case Kind::FrameRef:
      return frame;
    case Kind::Intersection:
      return "(INTERSECTION " + left->render() + " " + right->render() + ")";
    case Kind::Union:
      return "(UNION " + left->render() + " " + right->render() + ")";
    case Kind::Not:
      return "(NOT " + left->render() + ")";
  }
  return {};
}

// ── Parsing ─────────────────────────────────────────────────────────────────

namespace {

using detail::Lexer;

constexpr std::array<std::string_view, 12> kFrmKeywords = {
    "Frame", "in",          "KB",  "SuperClasses", "MemberSlot",   "ValueClass",
    "Cardinality", "Min",   "Max", "UNION",        "INTERSECTION", "NOT"};

bool frm_keyword(std::string_view s) {
  for (auto k : kFrmKeywords)
    if (k == s) return true;
  return false;
}

class FrmParser {
public:
  explicit FrmParser(const std::string& text) : lex_(text) {}

  FrameKB parse_file() {
    FrameKB kb;
    while (!lex_.at_end()) {
      lex_.expect("Frame");
      lex_.expect(":");
      std::string name = frame_name();
      lex_.expect("in");
      lex_.expect("KB");
      std::string kbName = lex_.expect_ident("knowledge-base name");
      if (kb.kbName.empty()) kb.kbName = kbName;

      for (const auto& def : kb.frames)
        if (def.name == name)
          lex_.fail("duplicate definition of frame '" + name + "'");

      FrameDefinition def;
      def.name = name;
      def.body = parse_body();
      record_names(kb, def);
      kb.frames.push_back(std::move(def));
    }
    return kb;
  }

  FrameExpr parse_expr_only() {
    FrameExpr e = parse_body();
    if (!lex_.at_end()) lex_.fail("trailing input after frame description");
    return e;
  }

private:
  FrameExpr parse_body() {
    FrameExpr body;
    if (lex_.accept("SuperClasses")) {
      lex_.expect(":");
      body.supers.push_back(frame_name());
      while (lex_.accept(",")) body.supers.push_back(frame_name());
    }
    while (lex_.accept("MemberSlot")) {
      lex_.expect(":");
      SlotSpec slot;
      slot.slot = frame_name();
      for (const auto& other : body.slots)
        if (other.slot == slot.slot)
          lex_.fail("duplicate slot '" + slot.slot + "' in one frame");
      lex_.expect("ValueClass");
      lex_.expect(":");
      slot.valueClass = parse_constraint();
      while (lex_.accept("Cardinality")) {
        lex_.expect(".");
        if (lex_.accept("Min")) {
          if (slot.minCard) lex_.fail("duplicate Cardinality.Min");
          lex_.expect(":");
          slot.minCard = positive_number("Cardinality.Min");
        } else {
          lex_.expect("Max");
          if (slot.maxCard) lex_.fail("duplicate Cardinality.Max");
          lex_.expect(":");
          slot.maxCard = positive_number("Cardinality.Max");
        }
      }
      body.slots.push_back(std::move(slot));
    }
    return body;
  }

  SlotConstraintPtr parse_constraint() {
    if (lex_.accept("(")) {
      if (lex_.accept("UNION")) {
        auto l = parse_constraint();
        auto r = parse_constraint();
        lex_.expect(")");
        return SlotConstraint::union_of(std::move(l), std::move(r));
      }
      if (lex_.accept("INTERSECTION")) {
        auto l = parse_constraint();
        auto r = parse_constraint();
        lex_.expect(")");
        return SlotConstraint::intersection(std::move(l), std::move(r));
      }
      if (lex_.accept("NOT")) {
        auto inner = parse_constraint();
        lex_.expect(")");
        return SlotConstraint::negation(std::move(inner));
      }
      lex_.fail("expected UNION, INTERSECTION or NOT after '('");
    }
    return SlotConstraint::ref(frame_name());
  }

  std::string frame_name() {
    std::string name = lex_.expect_ident("name");
    if (frm_keyword(name)) lex_.fail("reserved word used as name: " + name);
    return name;
  }

  unsigned positive_number(const std::string& what) {
    unsigned n = lex_.expect_number();
    if (n == 0) lex_.fail(what + " must be a positive integer");
    return n;
  }

  void record_names(FrameKB& kb, const FrameDefinition& def) {
    kb.frameNames.insert(def.name);
    for (const auto& s : def.body.supers) kb.frameNames.insert(s);
    for (const auto& slot : def.body.slots) {
      kb.slotNames.insert(slot.slot);
      record_constraint(kb, *slot.valueClass);
    }
  }

  void record_constraint(FrameKB& kb, const SlotConstraint& h) {
    if (h.kind == SlotConstraint::Kind::FrameRef) {
      kb.frameNames.insert(h.frame);
      return;
    }
    if (h.left) record_constraint(kb, *h.left);
    if (h.right) record_constraint(kb, *h.right);
  }

  Lexer lex_;
};

}  // namespace

FrameKB parse_frames(const std::string& text) {
  return FrmParser(text).parse_file();
}

FrameExpr parse_frame_expr(const std::string& text) {
  return FrmParser(text).parse_expr_only();
}

// ── Rendering ───────────────────────────────────────────────────────────────

namespace {

void render_body(const FrameExpr& body, std::string& out) {
  if (!body.supers.empty()) {
    out += "  SuperClasses: ";
    for (std::size_t i = 0; i < body.supers.size(); ++i) {
      if (i) out += ", ";
      out += body.supers[i];
    }
    out += "\n";
  }
  for (const auto& slot : body.slots) {
    out += "  MemberSlot: " + slot.slot + "\n";
    out += "    ValueClass: " + slot.valueClass->render() + "\n";
    if (slot.minCard)
      out += "    Cardinality.Min: " + std::to_string(*slot.minCard) + "\n";
    if (slot.maxCard)
      out += "    Cardinality.Max: " + std::to_string(*slot.maxCard) + "\n";
  }
}

}  // namespace

std::string render_frames(const FrameKB& f) {
  std::string out;
  const std::string kbName = f.kbName.empty() ? "Unnamed" : f.kbName;
  for (const auto& def : f.frames) {
    out += "Frame: " + def.name + " in KB " + kbName + "\n";
    render_body(def.body, out);
  }
  return out;
}

// ── θ translation ───────────────────────────────────────────────────────────

namespace {

/// θ of a value class with NOT pushed down to atomic negation:
/// θ(NOT (UNION H1 H2)) = θ(NOT H1) ⊓ θ(NOT H2), and dually.
ConceptPtr theta_neg(const SlotConstraint& h);

ConceptPtr theta_pos(const SlotConstraint& h) {
  switch (h.kind) {
    case SlotConstraint::Kind::FrameRef:
      return ConceptExpr::atomic(h.frame);
    case SlotConstraint::Kind::Intersection:
      return ConceptExpr::conj({theta_pos(*h.left), theta_pos(*h.right)});
    case SlotConstraint::Kind::Union:
      return ConceptExpr::disj({theta_pos(*h.left), theta_pos(*h.right)});
    case SlotConstraint::Kind::Not:
      return theta_neg(*h.left);
  }
  return ConceptExpr::top();
}

ConceptPtr theta_neg(const SlotConstraint& h) {
  switch (h.kind) {
    case SlotConstraint::Kind::FrameRef:
      return ConceptExpr::neg_atomic(h.frame);
    case SlotConstraint::Kind::Intersection:
      return ConceptExpr::disj({theta_neg(*h.left), theta_neg(*h.right)});
    case SlotConstraint::Kind::Union:
      return ConceptExpr::conj({theta_neg(*h.left), theta_neg(*h.right)});
    case SlotConstraint::Kind::Not:
      return theta_pos(*h.left);
  }
  return ConceptExpr::bottom();
}

}  // namespace

ConceptPtr theta_constraint(const SlotConstraint& h) { return theta_pos(h); }

ConceptPtr theta_expr(const FrameExpr& e) {
  std::vector<ConceptPtr> parts;
  for (const auto& super : e.supers)
    parts.push_back(ConceptExpr::atomic(super));
  for (const auto& slot : e.slots) {
    RoleExpr role(slot.slot);
    parts.push_back(
        ConceptExpr::forall(role, theta_constraint(*slot.valueClass)));
    if (slot.minCard)
      parts.push_back(ConceptExpr::at_least(*slot.minCard, role));
    if (slot.maxCard)
      parts.push_back(ConceptExpr::at_most(*slot.maxCard, role));
  }
  return ConceptExpr::conj(std::move(parts));
}

KnowledgeBase translate_theta(const FrameKB& f) {
  KnowledgeBase kb;
  kb.name = f.kbName;
  for (const auto& name : f.frameNames) kb.add_concept(name);
  for (const auto& slot : f.slotNames) kb.add_role(slot);
  for (const auto& def : f.frames) {
    if (def.body.empty()) continue;  // no assertion for empty bodies
    kb.assertions.push_back({def.name, theta_expr(def.body)});
  }
  return kb;
}

// ── Reasoning services ──────────────────────────────────────────────────────

namespace {

void require_frame(const FrameKB& f, const std::string& frame) {
  if (!f.frameNames.count(frame))
    throw SignatureError("unknown frame '" + frame + "'");
}

void require_expr_names(const FrameKB& f, const FrameExpr& e) {
  for (const auto& s : e.supers) require_frame(f, s);
  for (const auto& slot : e.slots)
    if (!f.slotNames.count(slot.slot))
      throw SignatureError("unknown slot '" + slot.slot + "'");
}

}  // namespace

ReasoningVerdict frame_consistent(const FrameKB& f, const std::string& frame,
                                  const SearchBudget& budget) {
  require_frame(f, frame);
  return find_model(translate_theta(f), ConceptExpr::atomic(frame), budget);
}

ReasoningVerdict frame_more_general(const FrameKB& f, const std::string& frame,
                                    const FrameExpr& e,
                                    const SearchBudget& budget) {
  require_frame(f, frame);
  require_expr_names(f, e);
  return subsumption_counterexample(translate_theta(f),
                                    ConceptExpr::atomic(frame), theta_expr(e),
                                    budget);
}

}  // namespace aluni
