// ============================================================================
//  test_oo.cpp -- the object-oriented language, compilation, and instances
// ============================================================================

#include <doctest.h>

#include <random>

#include "aluni/diagnostics.hpp"
#include "aluni/interpretation.hpp"
#include "aluni/kb_parser.hpp"
#include "aluni/oo.hpp"
#include "aluni/reason.hpp"
#include "support/gen.hpp"
#include "support/paths.hpp"

using namespace aluni;

namespace {

OOSchema university() {
  return parse_oo(testing::fixture("fig7.oos"));
}

OOSchema nested() {
  return parse_oo(testing::fixture("ex56.oos"));
}

Interpretation cyclic() {
  return interpretation_from_json(testing::fixture("ex56_cycle.json"));
}

SearchBudget sized(int hi) {
  SearchBudget b;
  b.maxSize = hi;
  return b;
}

/// A legal instance of the university schema: one course taught by a
/// professor who values himself.
OOInstance small_instance() {
  OOInstance j;
  j.oids = {"a", "t"};
  j.pi["Course"] = {"a"};
  j.pi["Teacher"] = {"t"};
  j.pi["Professor"] = {"t"};
  j.rho.emplace("a", Value::rec_val({"enrolls", "taughtby"},
                                    {Value::set_val({}), Value::oid("t")}));
  j.rho.emplace("t", Value::oid("t"));
  return j;
}

}  // namespace

// ── Types and values ────────────────────────────────────────────────────────

TEST_CASE("type factories normalize unions and order record components") {
  TypePtr one = TypeExpr::union_of({TypeExpr::class_ref("A")});
  CHECK(one->kind() == TypeExpr::Kind::ClassRef);

  TypePtr rec = TypeExpr::record({"b", "a"}, {TypeExpr::class_ref("B"),
                                              TypeExpr::class_ref("A")});
  CHECK(rec->labels() == std::vector<std::string>{"a", "b"});
  CHECK(rec->parts()[0]->class_name() == "A");
  CHECK_THROWS_AS(TypeExpr::record({"a", "a"}, {TypeExpr::class_ref("A"),
                                                TypeExpr::class_ref("B")}),
                  Error);
}

TEST_CASE("set values deduplicate and records look up fields") {
  Value s = Value::set_val({Value::oid("y"), Value::oid("x"), Value::oid("y")});
  REQUIRE(s.children().size() == 2);
  CHECK(s.children()[0].oid_name() == "x");

  Value r = Value::rec_val({"b", "a"}, {Value::oid("v"), Value::oid("u")});
  REQUIRE(r.field("a") != nullptr);
  CHECK(r.field("a")->oid_name() == "u");
  CHECK(r.field("missing") == nullptr);
  CHECK(Value::rec_val({}, {}).children().empty());
}

// ── Parsing ─────────────────────────────────────────────────────────────────

TEST_CASE("the university schema parses with its opaque classes") {
  OOSchema s = university();
  CHECK(s.classNames == std::set<std::string>{"Course", "GradStudent",
                                              "Professor", "String",
                                              "Student", "Teacher"});
  CHECK(s.attrNames == std::set<std::string>{"degree", "enrolls", "taughtby"});
  CHECK(s.decls.count("Course") == 1);
  CHECK(s.is_opaque("Professor"));
  CHECK_FALSE(s.is_opaque("Teacher"));
  CHECK(s.decls.at("GradStudent").supers ==
        std::vector<std::string>{"Student"});
}

TEST_CASE("empty records and reserved names are rejected") {
  CHECK_THROWS_AS(parse_oo("Class C type-is Record End\n"), ParseError);
  CHECK_THROWS_AS(parse_oo("Class RecType type-is Set-of RecType\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_oo("Class C type-is Record value: C End\n"),
                  ParseError);
  CHECK_THROWS_AS(
      parse_oo("Class C type-is Record a: C, a: C End\n"), ParseError);
  CHECK_THROWS_AS(parse_oo("Class C type-is C\nClass C type-is C\n"),
                  ParseError);
}

TEST_CASE("rendering then reparsing reproduces the schema") {
  OOSchema s = university();
  CHECK(render_oo(parse_oo(render_oo(s))) == render_oo(s));
}

TEST_CASE("type expressions parse standalone") {
  TypePtr t = parse_type_expr("Union A, Set-of B End");
  REQUIRE(t->kind() == TypeExpr::Kind::Union);
  CHECK(t->parts()[0]->class_name() == "A");
  CHECK(t->parts()[1]->kind() == TypeExpr::Kind::SetOf);
}

// ── Depth ───────────────────────────────────────────────────────────────────

TEST_CASE("schema depth measures structural nesting") {
  CHECK(schema_depth(nested()) == 3);
  CHECK(schema_depth(university()) == 2);
  CHECK(schema_depth(parse_oo("Class C type-is C\n")) == 0);
  CHECK(type_depth(*parse_type_expr("Union A, B End")) == 0);
  CHECK(type_depth(*parse_type_expr("Set-of Set-of A")) == 2);
}

// ── Compilation ─────────────────────────────────────────────────────────────

TEST_CASE("the compiled university schema matches its published form") {
  KnowledgeBase got = translate_psi(university());
  KnowledgeBase want = parse_kb(testing::fixture("fig8.kb"));
  CHECK(collapsed(got) == collapsed(want));
}

TEST_CASE("the three reserved atoms carry their fixed assertions") {
  KnowledgeBase k = translate_psi(parse_oo("Class C type-is C\n"));
  KnowledgeBase expected = parse_kb(
      "concept AbstractClass; concept C; concept RecType; concept SetType;\n"
      "role member; role value;\n"
      "AbstractClass <= ATLEAST 1 value AND ATMOST 1 value;\n"
      "RecType <= ALL value.BOTTOM;\n"
      "SetType <= ALL value.BOTTOM AND NOT RecType;\n"
      "C <= AbstractClass AND ALL value.C;\n");
  CHECK(collapsed(k) == collapsed(expected));
}

TEST_CASE("type translation builds the structural concepts") {
  CHECK(psi_type(*parse_type_expr("Set-of A"))->render() ==
        "SetType AND ALL member.A");
  CHECK(psi_type(*parse_type_expr("Union A, B End"))->render() == "A OR B");
  CHECK(psi_type(*parse_type_expr("Record a: A End"))->render() ==
        "RecType AND ALL a.A AND ATLEAST 1 a AND ATMOST 1 a");
}

TEST_CASE("the compiled form stays in the finite-model fragment") {
  for (const OOSchema& s : {university(), nested()}) {
    KnowledgeBase k = translate_psi(s);
    for_each_expr(k, [](const ConceptExpr& e) {
      if (e.kind() == ConceptKind::Forall ||
          e.kind() == ConceptKind::AtLeast ||
          e.kind() == ConceptKind::AtMost) {
        CHECK_FALSE(e.role().inverted);
        if (e.kind() != ConceptKind::Forall) CHECK(e.bound() <= 1);
      }
    });
  }
}

// ── Instances and legality ──────────────────────────────────────────────────

TEST_CASE("active values close over structured children") {
  OOInstance j = small_instance();
  std::set<Value> vs = active_values(j);
  // Oid(a), Oid(t), the record assigned to a, and its empty enrollment set.
  CHECK(vs.size() == 4);
  CHECK(vs.count(Value::oid("t")) == 1);
  CHECK(vs.count(Value::set_val({})) == 1);
}

TEST_CASE("instances must assign a value to every object") {
  OOInstance j = small_instance();
  j.rho.erase("t");
  CHECK_THROWS_AS(active_values(j), SignatureError);

  OOInstance stray = small_instance();
  stray.pi["Course"].insert("ghost");
  CHECK_THROWS_AS(active_values(stray), SignatureError);
}

TEST_CASE("the small instance is legal and mutations are caught") {
  OOSchema s = university();
  CHECK(check_legal_instance(s, small_instance()).ok);

  OOInstance wrongClass = small_instance();
  wrongClass.pi["Visitor"] = {"t"};
  CHECK_THROWS_AS(check_legal_instance(s, wrongClass), SignatureError);

  OOInstance badTeacher = small_instance();
  badTeacher.pi["Professor"].clear();  // t's value no longer names one
  InstanceReport r = check_legal_instance(s, badTeacher);
  REQUIRE_FALSE(r.ok);
  CHECK_FALSE(r.violations.empty());

  OOInstance badSupers = small_instance();
  badSupers.pi["GradStudent"] = {"t"};  // t is not a Student
  CHECK_FALSE(check_legal_instance(s, badSupers).ok);
}

TEST_CASE("type membership follows the value structure") {
  OOInstance j = small_instance();
  CHECK(type_member(*parse_type_expr("Set-of Student"), Value::set_val({}), j));
  CHECK_FALSE(type_member(*parse_type_expr("Set-of Course"),
                          Value::set_val({Value::oid("t")}), j));
  CHECK(type_member(*parse_type_expr("Union Professor, Course End"),
                    Value::oid("a"), j));

  // Records are open: extra components do not disqualify a value.
  Value wide = Value::rec_val({"taughtby", "extra"},
                              {Value::oid("t"), Value::oid("a")});
  CHECK(type_member(*parse_type_expr("Record taughtby: Teacher End"), wide, j));
  CHECK_FALSE(
      type_member(*parse_type_expr("Record missing: Teacher End"), wide, j));
}

// ── α: instances into models ────────────────────────────────────────────────

TEST_CASE("alpha lays out oids before structured values") {
  OOSchema s = university();
  OOInstance j;
  j.oids = {"a"};
  j.pi["Course"] = {"a"};
  j.rho.emplace("a", Value::rec_val({"enrolls", "taughtby"},
                                    {Value::set_val({}), Value::oid("a")}));
  Interpretation i = alpha_oo(s, j);
  CHECK(i.domain == 3);
  CHECK(i.concepts.at("AbstractClass") == std::set<int>{0});
  CHECK(i.concepts.at("Course") == std::set<int>{0});
  CHECK(i.concepts.at("SetType") == std::set<int>{1});
  CHECK(i.concepts.at("RecType") == std::set<int>{2});
  CHECK(i.roles.at("value") == std::set<std::pair<int, int>>{{0, 2}});
  CHECK(i.roles.at("enrolls") == std::set<std::pair<int, int>>{{2, 1}});
  CHECK(i.roles.at("taughtby") == std::set<std::pair<int, int>>{{2, 0}});
  CHECK(i.roles.at("member").empty());
  CHECK(i.roles.at("degree").empty());
}

TEST_CASE("alpha of a legal instance models the compiled schema") {
  OOSchema s = university();
  KnowledgeBase k = translate_psi(s);
  Interpretation i = alpha_oo(s, small_instance());
  CHECK(is_model(k, i).ok);
  CHECK(find_bad_cycles(s, i).empty());
}

TEST_CASE("alpha never creates structural cycles") {
  std::mt19937 rng(717);
  OOSchema s = university();
  for (int round = 0; round < 30; ++round) {
    OOInstance j = testing::random_oo_instance(rng, s);
    CHECK(find_bad_cycles(s, alpha_oo(s, j)).empty());
  }
}

// ── Cycles and unfolding ────────────────────────────────────────────────────

TEST_CASE("the cyclic model reports exactly one bad cycle") {
  OOSchema s = nested();
  Interpretation i = cyclic();
  REQUIRE(is_model(translate_psi(s), i).ok);

  std::vector<BadCycle> cycles = find_bad_cycles(s, i);
  REQUIRE(cycles.size() == 1);
  CHECK(cycles[0].members == std::vector<int>{2, 3});
  REQUIRE(cycles[0].edges.size() == 2);
  CHECK(cycles[0].edges[0] == CycleEdge{2, "a1", 3});
  CHECK(cycles[0].edges[1] == CycleEdge{3, "a2", 2});
}

TEST_CASE("cycles through objects or value edges are not bad") {
  OOSchema s = nested();
  // v4 -> v5 -> v6 -> o2 -> (value) -> v4: passes through an object.
  Interpretation i = cyclic();
  std::vector<BadCycle> cycles = find_bad_cycles(s, i);
  for (const BadCycle& c : cycles)
    for (int m : c.members) CHECK(m != 4);

  // A two-element value-edge loop among record individuals.
  Interpretation loop;
  loop.domain = 2;
  loop.concepts["RecType"] = {0, 1};
  loop.roles["value"] = {{0, 1}, {1, 0}};
  OOSchema tiny = parse_oo("Class C type-is C\n");
  loop.concepts["C"] = {};
  loop.concepts["AbstractClass"] = {};
  loop.concepts["SetType"] = {};
  loop.roles["member"] = {};
  CHECK(find_bad_cycles(tiny, loop).empty());
}

TEST_CASE("unfolding at the schema depth breaks the cycle and keeps the "
          "model") {
  OOSchema s = nested();
  KnowledgeBase k = translate_psi(s);
  Interpretation i = cyclic();

  Interpretation u = unfold(s, i, 3);
  CHECK(u.domain == 13);
  CHECK(is_model(k, u).ok);
  CHECK(u.concepts.at("AbstractClass") == i.concepts.at("AbstractClass"));
  CHECK(find_bad_cycles(s, u).empty());
}

TEST_CASE("an acyclic interpretation unfolds to itself") {
  OOSchema s = university();
  Interpretation i = alpha_oo(s, small_instance());
  CHECK(unfold(s, i, 2) == i);
}

TEST_CASE("a zero-depth unfolding severs the cycle edges entirely") {
  OOSchema s = nested();
  Interpretation u = unfold(s, cyclic(), 0);
  CHECK(u.domain == 7);  // no fresh copies
  CHECK(find_bad_cycles(s, u).empty());
  // Truncation below the schema depth loses modelhood: 2 lost its a1 edge.
  CHECK_FALSE(is_model(translate_psi(s), u).ok);
}

// ── β: models into instances ────────────────────────────────────────────────

TEST_CASE("beta of the unfolded cyclic model is a legal instance") {
  OOSchema s = nested();
  OOBetaResult r = beta_oo(s, cyclic());
  CHECK(r.notes.empty());
  CHECK(check_legal_instance(s, r.instance).ok);
  CHECK(r.instance.oids == std::set<std::string>{"o0", "o1"});

  // o1's value is untouched by the unfolding: the plain a1/a2/a3 chain.
  const Value& v = r.instance.rho.at("o1");
  REQUIRE(v.kind() == Value::Kind::Rec);
  REQUIRE(v.field("a1") != nullptr);
  CHECK(v.field("a1")->field("a2")->field("a3")->oid_name() == "o1");
}

TEST_CASE("beta inverts alpha up to canonical renaming") {
  OOSchema s = university();
  std::mt19937 rng(818);
  for (int round = 0; round < 40; ++round) {
    OOInstance j = testing::random_oo_instance(rng, s);
    OOBetaResult r = beta_oo(s, alpha_oo(s, j));
    CHECK(r.notes.empty());
    CHECK(r.instance == canonical_instance(s, j));
  }
}

TEST_CASE("beta notes its fallbacks on non-models") {
  OOSchema s = university();
  KnowledgeBase k = translate_psi(s);
  Interpretation i;
  i.domain = 1;
  i.concepts["Professor"] = {0};
  i.pad_signature(k);
  REQUIRE(is_model(k, i).ok);  // opaque classes are unconstrained

  OOBetaResult r = beta_oo(s, i);
  REQUIRE(r.notes.size() == 2);
  CHECK(r.notes[0].find("treated as an object") != std::string::npos);
  CHECK(r.notes[1].find("no value") != std::string::npos);
  CHECK(r.instance.pi.at("Professor") == std::set<std::string>{"o0"});
  CHECK(r.instance.rho.at("o0") == Value::set_val({}));
  CHECK(check_legal_instance(s, r.instance).ok);
}

TEST_CASE("beta rejects out-of-range interpretations") {
  OOSchema s = university();
  Interpretation i;
  i.domain = 1;
  i.concepts["Course"] = {7};
  CHECK_THROWS_AS(beta_oo(s, i), SignatureError);
}

// ── Renaming ────────────────────────────────────────────────────────────────

TEST_CASE("renaming applies simultaneously and reaches nested values") {
  OOInstance j = small_instance();
  OOInstance swapped = rename_oids(j, {{"a", "t"}, {"t", "a"}});
  CHECK(swapped.oids == j.oids);
  CHECK(swapped.pi.at("Course") == std::set<std::string>{"t"});
  CHECK(swapped.rho.at("t").field("taughtby")->oid_name() == "a");
  CHECK(swapped.rho.at("a") == Value::oid("a"));
}

TEST_CASE("canonical_instance renames by rank and pads the classes") {
  OOSchema s = university();
  OOInstance j = small_instance();
  OOInstance c = canonical_instance(s, j);
  CHECK(c.oids == std::set<std::string>{"o0", "o1"});
  CHECK(c.pi.at("Course") == std::set<std::string>{"o0"});
  CHECK(c.pi.at("Teacher") == std::set<std::string>{"o1"});
  CHECK(c.pi.at("String").empty());
  CHECK(c.rho.at("o1") == Value::oid("o1"));
}

// ── Reasoning services ──────────────────────────────────────────────────────

TEST_CASE("type consistency is bounded satisfiability of the translation") {
  OOSchema s = nested();
  ReasoningVerdict v = oo_type_consistent(s, TypeExpr::class_ref("C"),
                                          sized(4));
  REQUIRE(v.outcome == Outcome::WitnessFound);
  // One object plus a single record serving all three nesting levels.
  CHECK(v.bound == 2);
}

TEST_CASE("clashing inherited structure makes a class inconsistent") {
  OOSchema s = parse_oo(
      "Class A type-is Record x: String End\n"
      "Class B is-a A type-is Set-of String\n");
  ReasoningVerdict v =
      oo_type_consistent(s, TypeExpr::class_ref("B"), sized(4));
  CHECK(v.outcome == Outcome::NoModelUpTo);
}

TEST_CASE("declared subclasses are subtypes and sets are covariant") {
  OOSchema s = university();
  CHECK(oo_subtype(s, TypeExpr::class_ref("GradStudent"),
                   TypeExpr::class_ref("Student"), sized(3))
            .outcome == Outcome::NoModelUpTo);
  CHECK(oo_subtype(s, TypeExpr::set_of(TypeExpr::class_ref("GradStudent")),
                   TypeExpr::set_of(TypeExpr::class_ref("Student")), sized(3))
            .outcome == Outcome::NoModelUpTo);
  ReasoningVerdict apart =
      oo_subtype(s, TypeExpr::class_ref("Professor"),
                 TypeExpr::class_ref("Teacher"), sized(3));
  CHECK(apart.outcome == Outcome::WitnessFound);
}

// ── Instance JSON ───────────────────────────────────────────────────────────

TEST_CASE("instances round-trip through JSON") {
  OOInstance j = small_instance();
  CHECK(instance_from_json(to_json(j)) == j);
  CHECK(instance_from_json(to_json(j, /*pretty=*/true)) == j);
}

TEST_CASE("malformed instance JSON is rejected") {
  CHECK_THROWS_AS(instance_from_json("{"), ParseError);
  CHECK_THROWS_AS(instance_from_json(R"({"oids":[],"pi":{},"rho":{"x":5}})"),
                  ParseError);
}
