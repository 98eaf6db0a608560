#include "cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "aluni/cardinality.hpp"
#include "aluni/diagnostics.hpp"
#include "aluni/er.hpp"
#include "aluni/frames.hpp"
#include "aluni/interpretation.hpp"
#include "aluni/kb.hpp"
#include "aluni/kb_parser.hpp"
#include "aluni/oo.hpp"
#include "aluni/reason.hpp"

namespace aluni::cli {

namespace {

// ── Plumbing ────────────────────────────────────────────────────────────────

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// Infers frm/ers/oos from the file extension unless --from was given.
std::string schema_format(const std::string& from, const std::string& path) {
  if (!from.empty()) return from;
  if (path.ends_with(".frm")) return "frm";
  if (path.ends_with(".ers")) return "ers";
  if (path.ends_with(".oos")) return "oos";
  throw CLI::ValidationError(
      "cannot infer the schema format of '" + path +
      "'; pass --from frm, --from ers, or --from oos");
}

void print_interpretation(std::ostream& out, const Interpretation& i,
                          const std::string& indent) {
  out << indent << "domain size " << i.domain << "\n";
  for (const auto& [name, ext] : i.concepts) {
    out << indent << name << " = {";
    bool first = true;
    for (int d : ext) {
      if (!first) out << ", ";
      out << d;
      first = false;
    }
    out << "}\n";
  }
  for (const auto& [name, pairs] : i.roles) {
    out << indent << name << " = {";
    bool first = true;
    for (const auto& [x, y] : pairs) {
      if (!first) out << ", ";
      out << "(" << x << ", " << y << ")";
      first = false;
    }
    out << "}\n";
  }
}

void print_verdict(std::ostream& out, const ReasoningVerdict& v,
                   const std::string& positive, const std::string& negative) {
  switch (v.outcome) {
    case Outcome::WitnessFound:
      out << positive << " at size " << v.bound << "\n";
      print_interpretation(out, *v.witness, "  ");
      break;
    case Outcome::NoModelUpTo:
      out << negative << " up to size " << v.bound << "\n";
      break;
    case Outcome::TimedOut:
      out << "timed out; largest size completed: " << v.bound << "\n";
      break;
  }
}

struct Options {
  std::string from;
  std::string schemaPath;
  std::string dataPath;
  std::string goal;
  std::string lhs;
  std::string rhs;
  int minSize = 1;
  int maxSize = 8;
  double timeLimit = 30.0;
  bool pretty = false;
  bool elide = false;
};

SearchBudget budget_of(const Options& o) {
  SearchBudget budget;
  budget.minSize = o.minSize;
  budget.maxSize = o.maxSize;
  budget.timeLimit = o.timeLimit;
  budget.validate();
  return budget;
}

// ── Verbs ───────────────────────────────────────────────────────────────────

int run_translate(const Options& o, std::ostream& out) {
  const std::string format = schema_format(o.from, o.schemaPath);
  const std::string text = slurp(o.schemaPath);
  KnowledgeBase kb;
  if (format == "frm") {
    kb = translate_theta(parse_frames(text));
  } else if (format == "ers") {
    kb = translate_phi(parse_er(text), o.elide);
  } else {
    kb = translate_psi(parse_oo(text));
  }
  out << render_kb(collapsed(kb));
  return 0;
}

int run_check_model(const Options& o, std::ostream& out) {
  KnowledgeBase kb = parse_kb(slurp(o.schemaPath));
  Interpretation i = interpretation_from_json(slurp(o.dataPath));
  ModelCheckResult result = is_model(kb, i);
  if (o.pretty) {
    if (result.ok) {
      out << "the interpretation satisfies every assertion\n";
    } else {
      out << "not a model:\n";
      for (const auto& v : result.violations)
        out << "  assertion #" << v.assertionIndex << " (" << v.lhs
            << " <= " << v.rhs->render() << "): witness individual "
            << v.witness << "\n";
    }
  } else {
    nlohmann::json j;
    j["ok"] = result.ok;
    j["violations"] = nlohmann::json::array();
    for (const auto& v : result.violations)
      j["violations"].push_back({{"assertion", v.assertionIndex},
                                 {"lhs", v.lhs},
                                 {"rhs", v.rhs->render()},
                                 {"witness", v.witness}});
    out << j.dump() << "\n";
  }
  return result.ok ? 0 : 1;
}

int run_find_model(const Options& o, std::ostream& out) {
  KnowledgeBase kb = parse_kb(slurp(o.schemaPath));
  ConceptPtr goal = parse_concept_expr(o.goal, kb);
  ReasoningVerdict v = find_model(kb, goal, budget_of(o));
  if (o.pretty)
    print_verdict(out, v, "witness found", "no model");
  else
    out << to_json(v) << "\n";
  return v.found() ? 0 : 1;
}

int run_subsumes(const Options& o, std::ostream& out) {
  KnowledgeBase kb = parse_kb(slurp(o.schemaPath));
  ConceptPtr lhs = parse_concept_expr(o.lhs, kb);
  ConceptPtr rhs = parse_concept_expr(o.rhs, kb);
  ReasoningVerdict v = subsumption_counterexample(kb, lhs, rhs, budget_of(o));
  if (o.pretty)
    print_verdict(out, v, "counterexample found", "no counterexample");
  else
    out << to_json(v) << "\n";
  return v.outcome == Outcome::NoModelUpTo ? 0 : 1;
}

int run_analyze(const Options& o, std::ostream& out) {
  KnowledgeBase kb = parse_kb(slurp(o.schemaPath));
  auto facts = analyze_cardinalities(kb);
  if (o.pretty) {
    for (const auto& f : facts) out << f.describe() << "\n";
  } else {
    out << to_json(facts) << "\n";
  }
  return 0;
}

int report_legality(const Options& o, std::ostream& out, bool ok,
                    const std::vector<std::string>& violations) {
  if (o.pretty) {
    if (ok) {
      out << "legal\n";
    } else {
      out << "illegal:\n";
      for (const auto& v : violations) out << "  " << v << "\n";
    }
  } else {
    nlohmann::json j;
    j["ok"] = ok;
    j["violations"] = violations;
    out << j.dump() << "\n";
  }
  return ok ? 0 : 1;
}

int run_check_state(const Options& o, std::ostream& out) {
  const std::string format = schema_format(o.from, o.schemaPath);
  if (format == "frm") {
    throw CLI::ValidationError("check-state works on ers and oos schemas");
  }
  if (format == "ers") {
    ERSchema s = parse_er(slurp(o.schemaPath));
    DatabaseState b = state_from_json(slurp(o.dataPath));
    LegalityReport report = check_legal(s, b);
    return report_legality(o, out, report.ok, report.violations);
  }
  OOSchema s = parse_oo(slurp(o.schemaPath));
  OOInstance j = instance_from_json(slurp(o.dataPath));
  InstanceReport report = check_legal_instance(s, j);
  return report_legality(o, out, report.ok, report.violations);
}

int report_roundtrip(const Options& o, std::ostream& out, bool match,
                     const std::vector<std::string>& notes,
                     const std::string& resultJson) {
  if (o.pretty) {
    out << (match ? "round trip exact\n" : "round trip differs\n");
    for (const auto& n : notes) out << "  " << n << "\n";
  } else {
    nlohmann::json j;
    j["match"] = match;
    j["notes"] = notes;
    j["result"] = nlohmann::json::parse(resultJson);
    out << j.dump() << "\n";
  }
  return match ? 0 : 1;
}

int run_roundtrip(const Options& o, std::ostream& out) {
  const std::string format = schema_format(o.from, o.schemaPath);
  if (format == "frm") {
    throw CLI::ValidationError("roundtrip works on ers and oos schemas");
  }
  if (format == "ers") {
    ERSchema s = parse_er(slurp(o.schemaPath));
    DatabaseState b = state_from_json(slurp(o.dataPath));
    BetaResult result = beta_er(s, alpha_er(s, b));
    bool match = result.state == canonical_state(s, b);
    return report_roundtrip(o, out, match, result.notes,
                            to_json(result.state));
  }
  OOSchema s = parse_oo(slurp(o.schemaPath));
  OOInstance j = instance_from_json(slurp(o.dataPath));
  OOBetaResult result = beta_oo(s, alpha_oo(s, j));
  bool match = result.instance == canonical_instance(s, j);
  return report_roundtrip(o, out, match, result.notes,
                          to_json(result.instance));
}

int run_depth(const Options& o, std::ostream& out) {
  OOSchema s = parse_oo(slurp(o.schemaPath));
  out << "schema depth: " << schema_depth(s) << "\n";
  return 0;
}

}  // namespace

// ── Driver ──────────────────────────────────────────────────────────────────

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"class-based schema compilation and finite-model services"};
  app.require_subcommand(1);
  Options o;

  auto* translate =
      app.add_subcommand("translate", "compile a schema to .kb text");
  translate->add_option("--from", o.from,
                        "schema format (default: from the file extension)")
      ->check(CLI::IsMember({"frm", "ers", "oos"}));
  translate->add_option("schema", o.schemaPath, "schema file")->required();
  translate->add_flag("--elide-disjointness", o.elide,
                      "omit the pairwise disjointness block (ers only)");

  auto* checkModel = app.add_subcommand(
      "check-model", "test an interpretation against a knowledge base");
  checkModel->add_option("kb", o.schemaPath, ".kb file")->required();
  checkModel->add_option("interpretation", o.dataPath, "interpretation JSON")
      ->required();

  auto* findModel = app.add_subcommand(
      "find-model", "search for a finite model populating a goal concept");
  findModel->add_option("kb", o.schemaPath, ".kb file")->required();
  findModel->add_option("--goal", o.goal, "goal concept expression")
      ->required();

  auto* subsumes = app.add_subcommand(
      "subsumes", "search for a finite counterexample to an inclusion");
  subsumes->add_option("kb", o.schemaPath, ".kb file")->required();
  subsumes->add_option("--lhs", o.lhs, "subsumee expression")->required();
  subsumes->add_option("--rhs", o.rhs, "subsumer expression")->required();

  auto* analyze = app.add_subcommand(
      "analyze", "derive cardinality facts and finite-model consequences");
  analyze->add_option("kb", o.schemaPath, ".kb file")->required();

  auto* checkState = app.add_subcommand(
      "check-state", "validate a database state or instance against a schema");
  checkState->add_option("schema", o.schemaPath, ".ers or .oos file")
      ->required();
  checkState->add_option("data", o.dataPath, "state or instance JSON")
      ->required();
  checkState->add_option("--from", o.from, "schema format")
      ->check(CLI::IsMember({"ers", "oos"}));

  auto* roundtrip = app.add_subcommand(
      "roundtrip", "embed data into a model, fold it back, and compare");
  roundtrip->add_option("schema", o.schemaPath, ".ers or .oos file")
      ->required();
  roundtrip->add_option("data", o.dataPath, "state or instance JSON")
      ->required();
  roundtrip->add_option("--from", o.from, "schema format")
      ->check(CLI::IsMember({"ers", "oos"}));

  auto* depth =
      app.add_subcommand("depth", "print the nesting depth of a schema");
  depth->add_option("schema", o.schemaPath, ".oos file")->required();

  for (auto* sub : {findModel, subsumes}) {
    sub->add_option("--min", o.minSize, "smallest domain size");
    sub->add_option("--max", o.maxSize, "largest domain size");
    sub->add_option("--time", o.timeLimit, "time limit in seconds");
  }
  for (auto* sub : {checkModel, findModel, subsumes, analyze, checkState,
                    roundtrip})
    sub->add_flag("--pretty", o.pretty, "human-readable report");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (translate->parsed()) return run_translate(o, out);
    if (checkModel->parsed()) return run_check_model(o, out);
    if (findModel->parsed()) return run_find_model(o, out);
    if (subsumes->parsed()) return run_subsumes(o, out);
    if (analyze->parsed()) return run_analyze(o, out);
    if (checkState->parsed()) return run_check_state(o, out);
    if (roundtrip->parsed()) return run_roundtrip(o, out);
    if (depth->parsed()) return run_depth(o, out);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  err << "error: no verb selected\n";
  return 2;
}

}  // namespace aluni::cli
