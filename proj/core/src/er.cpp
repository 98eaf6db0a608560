#include "aluni/er.hpp"

#include <algorithm>
#include <array>

#include <nlohmann/json.hpp>

#include "aluni/diagnostics.hpp"
#include "lexer.hpp"

namespace aluni {

// ── Schema helpers ──────────────────────────────────────────────────────────

bool ERSchema::isa_star(const std::string& sub, const std::string& super) const {
  if (sub == super) return true;
  std::set<std::string> visited{sub};
  std::vector<std::string> frontier{sub};
  while (!frontier.empty()) {
    std::string cur = std::move(frontier.back());
    frontier.pop_back();
    for (const auto& [s, sup] : isa) {
      if (s != cur || !visited.insert(sup).second) continue;
      if (sup == super) return true;
      frontier.push_back(sup);
    }
  }
  return false;
}

const std::string& ERSchema::role_owner(const std::string& role) const {
  for (const auto& [r, tuple] : rel)
    for (const auto& [u, e] : tuple) {
      (void)e;
      if (u == role) return r;
    }
  throw SignatureError("unknown role '" + role + "'");
}

// ── Basic-domain values ─────────────────────────────────────────────────────
//
//  Basic domains are realized as countable enumerations: the k-th value of
//  domain D is the tagged string "D#k".

namespace {

struct DomainValue {
  std::string domain;
  unsigned index;
};

std::optional<DomainValue> parse_value(const std::string& text) {
  auto hash = text.rfind('#');
  if (hash == std::string::npos || hash == 0 || hash + 1 >= text.size())
    return std::nullopt;
  DomainValue v;
  v.domain = text.substr(0, hash);
  for (std::size_t i = hash + 1; i < text.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
  v.index = static_cast<unsigned>(std::stoul(text.substr(hash + 1)));
  return v;
}

std::string make_value(const std::string& domain, unsigned index) {
  return domain + "#" + std::to_string(index);
}

}  // namespace

// ── Parsing ─────────────────────────────────────────────────────────────────

namespace {

using detail::Lexer;

constexpr std::array<std::string_view, 6> kErsKeywords = {
    "entity", "relationship", "card", "isa", "attrs", "in"};

bool ers_keyword(std::string_view s) {
  for (auto k : kErsKeywords)
    if (k == s) return true;
  return false;
}

class ErsParser {
public:
  explicit ErsParser(const std::string& text) : lex_(text) {}

  ERSchema parse_file() {
    while (!lex_.at_end()) {
      if (lex_.accept("entity")) {
        parse_entity();
      } else if (lex_.accept("relationship")) {
        parse_relationship();
      } else if (lex_.accept("card")) {
        parse_card();
      } else {
        lex_.fail("expected 'entity', 'relationship' or 'card', found " +
                  lex_.describe());
      }
    }
    validate();
    return s_;
  }

private:
  void parse_entity() {
    std::string name = er_name();
    if (!s_.entities.insert(name).second)
      lex_.fail("duplicate entity '" + name + "'");
    if (lex_.accept("isa")) {
      do {
        isaRefs_.push_back({name, er_name()});
      } while (lex_.accept(","));
    }
    if (lex_.accept("attrs")) {
      auto& tuple = s_.att[name];
      do {
        std::string attr = er_name();
        lex_.expect(":");
        std::string domain = er_name();
        for (const auto& [a, d] : tuple) {
          (void)d;
          if (a == attr)
            lex_.fail("duplicate attribute '" + attr + "' on entity '" + name +
                      "'");
        }
        tuple.push_back({attr, domain});
        s_.attributes.insert(attr);
        s_.domains.insert(domain);
      } while (lex_.accept(","));
    }
    lex_.expect(";");
  }

  void parse_relationship() {
    std::string name = er_name();
    if (!s_.relationships.insert(name).second)
      lex_.fail("duplicate relationship '" + name + "'");
    lex_.expect("(");
    auto& tuple = s_.rel[name];
    do {
      std::string role = er_name();
      lex_.expect(":");
      std::string entity = er_name();
      if (!s_.roles.insert(role).second)
        lex_.fail("role '" + role + "' is reused; each role is specific to "
                  "exactly one relationship");
      tuple.push_back({role, entity});
    } while (lex_.accept(","));
    lex_.expect(")");
    lex_.expect(";");
    if (tuple.size() < 2)
      lex_.fail("relationship '" + name + "' must take at least two roles");
  }

  void parse_card() {
    std::string entity = er_name();
    lex_.expect("in");
    std::string relationship = er_name();
    lex_.expect(".");
    std::string role = er_name();
    ERSchema::Card card;
    card.min = lex_.expect_number();
    lex_.expect("..");
    if (lex_.accept("*")) {
      card.max = std::nullopt;
    } else {
      card.max = lex_.expect_number();
    }
    lex_.expect(";");
    auto key = std::make_tuple(entity, relationship, role);
    if (s_.card.count(key))
      lex_.fail("duplicate cardinality for " + entity + " in " + relationship +
                "." + role);
    s_.card[key] = card;
  }

  std::string er_name() {
    std::string name = lex_.expect_ident("name");
    if (ers_keyword(name)) lex_.fail("reserved word used as name: " + name);
    return name;
  }

  void validate() {
    auto defined_entity = [&](const std::string& e) {
      if (!s_.entities.count(e))
        throw ParseError("undeclared entity '" + e + "'");
    };
    for (const auto& [sub, super] : isaRefs_) {
      defined_entity(sub);
      defined_entity(super);
      s_.isa.insert({sub, super});
    }
    for (const auto& [r, tuple] : s_.rel) {
      (void)r;
      for (const auto& [u, e] : tuple) {
        (void)u;
        defined_entity(e);
      }
    }
    // Alphabets must not collide where φ would merge the names.
    for (const auto& e : s_.entities) {
      if (s_.relationships.count(e))
        throw ParseError("name '" + e + "' is both entity and relationship");
      if (s_.domains.count(e))
        throw ParseError("name '" + e + "' is both entity and basic domain");
    }
    for (const auto& r : s_.relationships)
      if (s_.domains.count(r))
        throw ParseError("name '" + r + "' is both relationship and domain");
    for (const auto& a : s_.attributes)
      if (s_.roles.count(a))
        throw ParseError("name '" + a + "' is both attribute and role");
    // Cardinalities must sit on (sub-entities of) the role's primary entity.
    for (const auto& [key, card] : s_.card) {
      (void)card;
      const auto& [e, r, u] = key;
      defined_entity(e);
      if (!s_.relationships.count(r))
        throw ParseError("undeclared relationship '" + r + "'");
      const auto& tuple = s_.rel.at(r);
      const std::string* primary = nullptr;
      for (const auto& [role, ent] : tuple)
        if (role == u) primary = &ent;
      if (primary == nullptr)
        throw ParseError("role '" + u + "' does not belong to relationship '" +
                         r + "'");
      if (!s_.isa_star(e, *primary))
        throw ParseError("cardinality on '" + e + "' for " + r + "." + u +
                         " requires '" + e + "' isa* '" + *primary + "'");
    }
  }

  Lexer lex_;
  ERSchema s_;
  std::vector<std::pair<std::string, std::string>> isaRefs_;
};

}  // namespace

ERSchema parse_er(const std::string& text) {
  return ErsParser(text).parse_file();
}

std::string render_er(const ERSchema& s) {
  std::string out;
  for (const auto& e : s.entities) {
    out += "entity " + e;
    std::vector<std::string> supers;
    for (const auto& [sub, super] : s.isa)
      if (sub == e) supers.push_back(super);
    if (!supers.empty()) {
      out += " isa ";
      for (std::size_t i = 0; i < supers.size(); ++i) {
        if (i) out += ", ";
        out += supers[i];
      }
    }
    auto it = s.att.find(e);
    if (it != s.att.end() && !it->second.empty()) {
      out += " attrs ";
      for (std::size_t i = 0; i < it->second.size(); ++i) {
        if (i) out += ", ";
        out += it->second[i].first + ": " + it->second[i].second;
      }
    }
    out += ";\n";
  }
  for (const auto& [r, tuple] : s.rel) {
    out += "relationship " + r + " (";
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (i) out += ", ";
      out += tuple[i].first + ": " + tuple[i].second;
    }
    out += ");\n";
  }
  for (const auto& [key, card] : s.card) {
    const auto& [e, r, u] = key;
    out += "card " + e + " in " + r + "." + u + " " +
           std::to_string(card.min) + "..";
    out += card.max ? std::to_string(*card.max) : std::string("*");
    out += ";\n";
  }
  return out;
}

// ── φ translation ───────────────────────────────────────────────────────────

KnowledgeBase translate_phi(const ERSchema& s, bool elideDisjointness) {
  KnowledgeBase kb;
  for (const auto& e : s.entities) kb.add_concept(e);
  for (const auto& r : s.relationships) kb.add_concept(r);
  for (const auto& d : s.domains) kb.add_concept(d);
  for (const auto& a : s.attributes) kb.add_role(a);
  for (const auto& u : s.roles) kb.add_role(u);

  // (1) isa inclusions.
  for (const auto& [sub, super] : s.isa)
    kb.assertions.push_back({sub, ConceptExpr::atomic(super)});

  // (2) attribute typing and functionality.
  for (const auto& [e, tuple] : s.att) {
    if (tuple.empty()) continue;
    std::vector<ConceptPtr> parts;
    for (const auto& [a, d] : tuple) {
      RoleExpr attr(a);
      parts.push_back(ConceptExpr::forall(attr, ConceptExpr::atomic(d)));
      parts.push_back(ConceptExpr::exactly(1, attr));
    }
    kb.assertions.push_back({e, ConceptExpr::conj(std::move(parts))});
  }

  // (3) reified relationship typing: one functional role per position.
  for (const auto& [r, tuple] : s.rel) {
    std::vector<ConceptPtr> parts;
    for (const auto& [u, e] : tuple) {
      RoleExpr role(u);
      parts.push_back(ConceptExpr::forall(role, ConceptExpr::atomic(e)));
      parts.push_back(ConceptExpr::exactly(1, role));
    }
    kb.assertions.push_back({r, ConceptExpr::conj(std::move(parts))});
  }

  // (4) role closure: only tuples of R may point at a primary entity.
  for (const auto& [r, tuple] : s.rel)
    for (const auto& [u, e] : tuple)
      kb.assertions.push_back(
          {e, ConceptExpr::forall(RoleExpr(u, /*inverted=*/true),
                                  ConceptExpr::atomic(r))});

  // (5)/(6) participation bounds over the inverse roles.
  for (const auto& [key, card] : s.card) {
    const auto& [e, r, u] = key;
    (void)r;
    RoleExpr inv(u, /*inverted=*/true);
    if (card.min != 0)
      kb.assertions.push_back({e, ConceptExpr::at_least(card.min, inv)});
    if (card.max)
      kb.assertions.push_back({e, ConceptExpr::at_most(*card.max, inv)});
  }

  // (7) relationships and domains are disjoint from everything else.
  if (!elideDisjointness) {
    std::vector<std::string> sources;
    sources.insert(sources.end(), s.relationships.begin(),
                   s.relationships.end());
    sources.insert(sources.end(), s.domains.begin(), s.domains.end());
    std::sort(sources.begin(), sources.end());
    for (const auto& x1 : sources)
      for (const auto& x2 : kb.concepts)
        if (x1 != x2)
          kb.assertions.push_back({x1, ConceptExpr::neg_atomic(x2)});
  }
  return kb;
}

// ── State validation shared by legality, α ──────────────────────────────────

namespace {

/// Structural well-formedness of a state against a schema: known symbols,
/// individuals inside the domain, tuples labeled by exactly the right
/// roles, attribute values in the "D#k" format.  Violations here are
/// malformed inputs, not legality failures.
void validate_state(const ERSchema& s, const DatabaseState& b) {
  auto check_ind = [&](int d, const std::string& where) {
    if (!b.domain.count(d))
      throw SignatureError("individual " + std::to_string(d) + " in " + where +
                           " is outside the state domain");
  };
  for (const auto& [e, ext] : b.entityExt) {
    if (!s.entities.count(e))
      throw SignatureError("state mentions unknown entity '" + e + "'");
    for (int d : ext) check_ind(d, "entity " + e);
  }
  for (const auto& [a, pairs] : b.attrExt) {
    if (!s.attributes.count(a))
      throw SignatureError("state mentions unknown attribute '" + a + "'");
    for (const auto& [d, v] : pairs) {
      check_ind(d, "attribute " + a);
      if (!parse_value(v))
        throw SignatureError("attribute value '" + v +
                             "' is not of the form Domain#index");
    }
  }
  for (const auto& [r, tuples] : b.relExt) {
    if (!s.relationships.count(r))
      throw SignatureError("state mentions unknown relationship '" + r + "'");
    const auto& declared = s.rel.at(r);
    for (const auto& t : tuples) {
      if (t.assignments.size() != declared.size())
        throw SignatureError("tuple of '" + r +
                             "' is not total on the declared roles");
      for (const auto& [u, e] : declared) {
        (void)e;
        auto it = t.assignments.find(u);
        if (it == t.assignments.end())
          throw SignatureError("tuple of '" + r + "' lacks role '" + u + "'");
        check_ind(it->second, "relationship " + r);
      }
    }
  }
}

}  // namespace

// ── Legality (the four conditions) ──────────────────────────────────────────

LegalityReport check_legal(const ERSchema& s, const DatabaseState& b) {
  validate_state(s, b);
  LegalityReport report;
  report.ok = true;
  auto fail = [&](std::string msg) {
    report.ok = false;
    report.violations.push_back(std::move(msg));
  };
  auto ext = [&](const std::string& e) -> const std::set<int>& {
    static const std::set<int> empty;
    auto it = b.entityExt.find(e);
    return it == b.entityExt.end() ? empty : it->second;
  };

  // 1. isa containment.
  for (const auto& [sub, super] : s.isa) {
    const auto& supExt = ext(super);
    for (int d : ext(sub))
      if (!supExt.count(d)) {
        fail("isa: individual " + std::to_string(d) + " is in " + sub +
             " but not in " + super);
        break;
      }
  }

  // 2. exactly one properly typed value per declared attribute.
  for (const auto& [e, tuple] : s.att) {
    for (int d : ext(e)) {
      for (const auto& [a, domain] : tuple) {
        std::vector<std::string> values;
        auto it = b.attrExt.find(a);
        if (it != b.attrExt.end())
          for (const auto& [x, v] : it->second)
            if (x == d) values.push_back(v);
        if (values.size() != 1) {
          fail("attribute: individual " + std::to_string(d) + " of " + e +
               " has " + std::to_string(values.size()) + " values for " + a +
               " instead of exactly one");
          continue;
        }
        if (parse_value(values.front())->domain != domain)
          fail("attribute: value " + values.front() + " of " + a + " on " +
               std::to_string(d) + " is not in domain " + domain);
      }
    }
  }

  // 3. tuples typed by the primary entities.
  for (const auto& [r, declared] : s.rel) {
    auto it = b.relExt.find(r);
    if (it == b.relExt.end()) continue;
    for (const auto& t : it->second)
      for (const auto& [u, e] : declared)
        if (!ext(e).count(t.assignments.at(u))) {
          fail("typing: tuple of " + r + " fills role " + u + " with " +
               std::to_string(t.assignments.at(u)) + " outside entity " + e);
        }
  }

  // 4. participation counts within declared bounds.
  for (const auto& [key, card] : s.card) {
    const auto& [e, r, u] = key;
    auto it = b.relExt.find(r);
    for (int d : ext(e)) {
      std::size_t count = 0;
      if (it != b.relExt.end())
        for (const auto& t : it->second)
          if (t.assignments.at(u) == d) ++count;
      if (count < card.min)
        fail("cardinality: individual " + std::to_string(d) + " of " + e +
             " participates " + std::to_string(count) + " times in " + r + "." +
             u + ", minimum is " + std::to_string(card.min));
      if (card.max && count > *card.max)
        fail("cardinality: individual " + std::to_string(d) + " of " + e +
             " participates " + std::to_string(count) + " times in " + r + "." +
             u + ", maximum is " + std::to_string(*card.max));
    }
  }
  return report;
}

// ── α: state → interpretation ───────────────────────────────────────────────

Interpretation alpha_er(const ERSchema& s, const DatabaseState& b) {
  validate_state(s, b);
  Interpretation i;

  // Layout: state individuals in ascending order, then active values
  // sorted by (domain, index), then one individual per relationship tuple
  // (relationships by name, tuples in their set order).
  std::map<int, int> indOf;
  for (int d : b.domain) {
    int idx = i.domain++;
    indOf[d] = idx;
  }

  std::set<std::pair<std::string, unsigned>> activeValues;
  for (const auto& [a, pairs] : b.attrExt) {
    (void)a;
    for (const auto& [d, v] : pairs) {
      (void)d;
      auto parsed = parse_value(v);
      activeValues.insert({parsed->domain, parsed->index});
    }
  }
  std::map<std::string, int> valOf;
  for (const auto& [domain, index] : activeValues)
    valOf[make_value(domain, index)] = i.domain++;

  std::map<std::string, std::map<LabeledTuple, int>> tupleOf;
  for (const auto& [r, declared] : s.rel) {
    (void)declared;
    auto it = b.relExt.find(r);
    if (it == b.relExt.end()) continue;
    for (const auto& t : it->second) tupleOf[r][t] = i.domain++;
  }

  // Concept extensions copy the state's.
  for (const auto& e : s.entities) {
    auto& target = i.concepts[e];
    auto it = b.entityExt.find(e);
    if (it != b.entityExt.end())
      for (int d : it->second) target.insert(indOf.at(d));
  }
  for (const auto& r : s.relationships) {
    auto& target = i.concepts[r];
    for (const auto& [t, idx] : tupleOf[r]) {
      (void)t;
      target.insert(idx);
    }
  }
  for (const auto& d : s.domains) {
    auto& target = i.concepts[d];
    for (const auto& [domain, index] : activeValues)
      if (domain == d) target.insert(valOf.at(make_value(domain, index)));
  }

  // Attribute roles from the state, tuple roles from the reification.
  for (const auto& a : s.attributes) {
    auto& target = i.roles[a];
    auto it = b.attrExt.find(a);
    if (it != b.attrExt.end())
      for (const auto& [d, v] : it->second)
        target.insert({indOf.at(d), valOf.at(v)});
  }
  for (const auto& u : s.roles) i.roles[u];
  for (const auto& [r, tuples] : tupleOf)
    for (const auto& [t, idx] : tuples)
      for (const auto& [u, filler] : t.assignments)
        i.roles[u].insert({idx, indOf.at(filler)});
  return i;
}

// ── Relation-descriptiveness (condition 8) ──────────────────────────────────

namespace {

const std::set<int>& ext_of(const Interpretation& i, const std::string& name) {
  auto it = i.concepts.find(name);
  if (it == i.concepts.end())
    throw SignatureError("interpretation lacks concept '" + name + "'");
  return it->second;
}

/// Per-role successor sets of a tuple individual — its "filler profile".
std::vector<std::set<int>> profile_of(
    const Interpretation& i, int d,
    const std::vector<std::pair<std::string, std::string>>& declared) {
  std::vector<std::set<int>> profile;
  profile.reserve(declared.size());
  for (const auto& [u, e] : declared) {
    (void)e;
    auto it = i.roles.find(u);
    if (it == i.roles.end())
      throw SignatureError("interpretation lacks role '" + u + "'");
    std::set<int> successors;
    for (const auto& [x, y] : it->second)
      if (x == d) successors.insert(y);
    profile.push_back(std::move(successors));
  }
  return profile;
}

std::vector<ConflictSet> conflicts_of(
    const ERSchema& s, const Interpretation& i, const std::string& r) {
  const auto& declared = s.rel.at(r);
  std::map<std::vector<std::set<int>>, std::vector<int>> groups;
  for (int d : ext_of(i, r)) groups[profile_of(i, d, declared)].push_back(d);
  std::vector<ConflictSet> conflicts;
  for (auto& [profile, members] : groups) {
    (void)profile;
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end());
    conflicts.push_back({r, members});
  }
  // Deterministic order: by least member.
  std::sort(conflicts.begin(), conflicts.end(),
            [](const ConflictSet& a, const ConflictSet& b) {
              return a.members.front() < b.members.front();
            });
  return conflicts;
}

}  // namespace

DescriptivenessReport is_relation_descriptive(const ERSchema& s,
                                              const Interpretation& i) {
  DescriptivenessReport report;
  for (const auto& [r, declared] : s.rel) {
    (void)declared;
    auto conflicts = conflicts_of(s, i, r);
    report.conflicts.insert(report.conflicts.end(), conflicts.begin(),
                            conflicts.end());
  }
  report.ok = report.conflicts.empty();
  return report;
}

// ── Conflict elimination (copy and exchange) ────────────────────────────────

Interpretation make_relation_descriptive(const ERSchema& s,
                                         const Interpretation& i,
                                         const ConceptPtr& witness) {
  KnowledgeBase phi = translate_phi(s);
  if (!is_model(phi, i).ok)
    throw Error("make_relation_descriptive requires a model of the schema");
  if (evaluate_concept(*witness, i).empty())
    throw Error("make_relation_descriptive requires a nonempty witness");

  Interpretation cur = i;
  for (const auto& [r, declared] : s.rel) {
    auto conflicts = conflicts_of(s, cur, r);
    if (conflicts.empty()) continue;

    // Conf: every conflict member beyond the least-index representative.
    std::vector<int> conf;
    for (const auto& set : conflicts)
      conf.insert(conf.end(), set.members.begin() + 1, set.members.end());
    std::sort(conf.begin(), conf.end());

    const std::size_t c = conf.size();
    const int n = cur.domain;
    if (c > 17 ||
        (static_cast<unsigned long long>(n) << c) > 200000ull)
      throw BlowupError("conflict elimination for '" + r + "' would need " +
                        std::to_string(1ull << c) + " copies of a size-" +
                        std::to_string(n) + " model");
    const std::size_t copies = std::size_t{1} << c;

    // Disjoint union of 2^c shifted copies.
    Interpretation next;
    next.domain = static_cast<int>(copies) * n;
    for (const auto& [name, ext] : cur.concepts) {
      auto& target = next.concepts[name];
      for (std::size_t z = 0; z < copies; ++z)
        for (int d : ext) target.insert(d + static_cast<int>(z) * n);
    }
    for (const auto& [name, pairs] : cur.roles) {
      auto& target = next.roles[name];
      for (std::size_t z = 0; z < copies; ++z)
        for (const auto& [x, y] : pairs)
          target.insert({x + static_cast<int>(z) * n,
                         y + static_cast<int>(z) * n});
    }

    // Exchange the last-role successors of each conflict individual
    // between each copy Z containing it and the copy Z ∖ {it}.  The pairs
    // (Z, Z∖{t}) partition the copies per individual, so exchanges never
    // interfere.
    const std::string& lastRole = declared.back().first;
    auto& edges = next.roles.at(lastRole);
    for (std::size_t t = 0; t < c; ++t) {
      for (std::size_t z = 0; z < copies; ++z) {
        if (!(z & (std::size_t{1} << t))) continue;
        const std::size_t zLow = z & ~(std::size_t{1} << t);
        const int dHigh = conf[t] + static_cast<int>(z) * n;
        const int dLow = conf[t] + static_cast<int>(zLow) * n;
        std::set<int> succHigh, succLow;
        for (auto it = edges.begin(); it != edges.end();) {
          if (it->first == dHigh) {
            succHigh.insert(it->second);
            it = edges.erase(it);
          } else if (it->first == dLow) {
            succLow.insert(it->second);
            it = edges.erase(it);
          } else {
            ++it;
          }
        }
        for (int y : succHigh) edges.insert({dLow, y});
        for (int y : succLow) edges.insert({dHigh, y});
      }
    }
    cur = std::move(next);
  }
  return cur;
}

// ── β: interpretation → state ───────────────────────────────────────────────

BetaResult beta_er(const ERSchema& s, const Interpretation& i) {
  for (const auto& [name, ext] : i.concepts)
    for (int d : ext)
      if (d < 0 || d >= i.domain)
        throw SignatureError("individual " + std::to_string(d) +
                             " in concept '" + name + "' is out of range");
  for (const auto& [name, pairs] : i.roles)
    for (const auto& [x, y] : pairs)
      if (x < 0 || x >= i.domain || y < 0 || y >= i.domain)
        throw SignatureError("pair in role '" + name + "' is out of range");

  BetaResult out;
  auto note = [&](std::string msg) { out.notes.push_back(std::move(msg)); };

  // Classify individuals: relationship concepts first (sorted), then
  // domain concepts, else entity-level.  Models with the disjointness
  // block never overlap; overlaps are reported and resolved by precedence.
  enum class Kind : std::uint8_t { Plain, Rel, Dom };
  struct Class {
    Kind kind = Kind::Plain;
    std::string name;
  };
  std::vector<Class> cls(static_cast<std::size_t>(i.domain));
  for (const auto& r : s.relationships)
    for (int d : ext_of(i, r)) {
      auto& c = cls[static_cast<std::size_t>(d)];
      if (c.kind == Kind::Plain) {
        c = {Kind::Rel, r};
      } else {
        note("individual " + std::to_string(d) + " is in both " + c.name +
             " and " + r + "; kept as " + c.name);
      }
    }
  for (const auto& dom : s.domains)
    for (int d : ext_of(i, dom)) {
      auto& c = cls[static_cast<std::size_t>(d)];
      if (c.kind == Kind::Plain) {
        c = {Kind::Dom, dom};
      } else {
        note("individual " + std::to_string(d) + " is in both " + c.name +
             " and " + dom + "; kept as " + c.name);
      }
    }

  // Δ^B: everything that is neither a tuple nor a value individual.
  for (int d = 0; d < i.domain; ++d)
    if (cls[static_cast<std::size_t>(d)].kind == Kind::Plain)
      out.state.domain.insert(d);

  // Injective enumeration of domain individuals: ascending index ↦ "D#k".
  std::map<int, std::string> valueOf;
  for (const auto& dom : s.domains) {
    unsigned k = 0;
    for (int d : ext_of(i, dom)) {
      if (cls[static_cast<std::size_t>(d)].kind == Kind::Dom &&
          cls[static_cast<std::size_t>(d)].name == dom)
        valueOf[d] = make_value(dom, k++);
    }
  }

  // Entity extensions: identity on entity-level individuals.
  for (const auto& e : s.entities) {
    auto& target = out.state.entityExt[e];
    for (int d : ext_of(i, e)) {
      if (cls[static_cast<std::size_t>(d)].kind == Kind::Plain)
        target.insert(d);
      else
        note("membership of non-entity individual " + std::to_string(d) +
             " in entity " + e + " dropped");
    }
  }

  // Attribute pairs: entity source, domain-value target.
  for (const auto& a : s.attributes) {
    auto it = i.roles.find(a);
    if (it == i.roles.end())
      throw SignatureError("interpretation lacks role '" + a + "'");
    auto& target = out.state.attrExt[a];
    for (const auto& [x, y] : it->second) {
      if (cls[static_cast<std::size_t>(x)].kind != Kind::Plain) continue;
      auto vit = valueOf.find(y);
      if (vit == valueOf.end()) {
        note("attribute edge " + a + "(" + std::to_string(x) + ", " +
             std::to_string(y) + ") dropped: target is not a domain value");
        continue;
      }
      target.insert({x, vit->second});
    }
  }

  // Relationship tuples from tuple individuals' role fillers.
  for (const auto& [r, declared] : s.rel) {
    auto& target = out.state.relExt[r];
    for (int d : ext_of(i, r)) {
      if (cls[static_cast<std::size_t>(d)].kind != Kind::Rel ||
          cls[static_cast<std::size_t>(d)].name != r)
        continue;
      LabeledTuple t;
      bool complete = true;
      for (const auto& [u, e] : declared) {
        (void)e;
        auto rit = i.roles.find(u);
        if (rit == i.roles.end())
          throw SignatureError("interpretation lacks role '" + u + "'");
        std::set<int> fillers;
        for (const auto& [x, y] : rit->second)
          if (x == d) fillers.insert(y);
        if (fillers.empty()) {
          note("tuple individual " + std::to_string(d) + " of " + r +
               " lacks a filler for role " + u + "; tuple dropped");
          complete = false;
          break;
        }
        if (fillers.size() > 1)
          note("tuple individual " + std::to_string(d) + " of " + r +
               " has several fillers for role " + u +
               "; least index chosen");
        int filler = *fillers.begin();
        if (cls[static_cast<std::size_t>(filler)].kind != Kind::Plain) {
          note("tuple individual " + std::to_string(d) + " of " + r +
               " fills role " + u + " with a non-entity individual; "
               "tuple dropped");
          complete = false;
          break;
        }
        t.assignments[u] = filler;
      }
      if (complete) target.insert(std::move(t));
    }
  }
  return out;
}

DatabaseState canonical_state(const ERSchema& s, const DatabaseState& b) {
  validate_state(s, b);

  std::map<int, int> rank;
  for (int d : b.domain) {
    int r = static_cast<int>(rank.size());
    rank[d] = r;
  }
  // Per-domain value rank, by ascending original index.
  std::map<std::string, std::string> valueRank;
  std::map<std::string, std::set<unsigned>> perDomain;
  for (const auto& [a, pairs] : b.attrExt) {
    (void)a;
    for (const auto& [d, v] : pairs) {
      (void)d;
      auto parsed = parse_value(v);
      perDomain[parsed->domain].insert(parsed->index);
    }
  }
  for (const auto& [domain, indices] : perDomain) {
    unsigned k = 0;
    for (unsigned index : indices)
      valueRank[make_value(domain, index)] = make_value(domain, k++);
  }

  DatabaseState out;
  for (const auto& [d, r] : rank) {
    (void)d;
    out.domain.insert(r);
  }
  for (const auto& e : s.entities) {
    auto& target = out.entityExt[e];
    auto it = b.entityExt.find(e);
    if (it != b.entityExt.end())
      for (int d : it->second) target.insert(rank.at(d));
  }
  for (const auto& a : s.attributes) {
    auto& target = out.attrExt[a];
    auto it = b.attrExt.find(a);
    if (it != b.attrExt.end())
      for (const auto& [d, v] : it->second)
        target.insert({rank.at(d), valueRank.at(v)});
  }
  for (const auto& [r, declared] : s.rel) {
    (void)declared;
    auto& target = out.relExt[r];
    auto it = b.relExt.find(r);
    if (it == b.relExt.end()) continue;
    for (const auto& t : it->second) {
      LabeledTuple renamed;
      for (const auto& [u, d] : t.assignments)
        renamed.assignments[u] = rank.at(d);
      target.insert(std::move(renamed));
    }
  }
  return out;
}

// ── Reasoning services ──────────────────────────────────────────────────────

ReasoningVerdict er_entity_satisfiable(const ERSchema& s,
                                       const std::string& entity,
                                       const SearchBudget& budget) {
  if (!s.entities.count(entity))
    throw SignatureError("unknown entity '" + entity + "'");
  return find_model(translate_phi(s), ConceptExpr::atomic(entity), budget);
}

InheritanceAnswer er_inherits(const ERSchema& s, const std::string& sub,
                              const std::string& super,
                              const SearchBudget& budget) {
  if (!s.entities.count(sub))
    throw SignatureError("unknown entity '" + sub + "'");
  if (!s.entities.count(super))
    throw SignatureError("unknown entity '" + super + "'");

  KnowledgeBase kb = translate_phi(s);
  InheritanceAnswer answer;
  answer.facts = analyze_cardinalities(kb);
  answer.counterexample = subsumption_counterexample(
      kb, ConceptExpr::atomic(sub), ConceptExpr::atomic(super), budget);

  // Positive evidence: reachability over Subset ∪ FiniteSubsumption edges,
  // or finite inconsistency of the sub-entity (the empty set inherits
  // everything).
  std::set<std::string> reached{sub};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& f : answer.facts) {
      if ((f.kind == FactKind::Subset ||
           f.kind == FactKind::FiniteSubsumption) &&
          reached.count(f.a) && reached.insert(f.b).second)
        grew = true;
      if (f.kind == FactKind::FiniteInconsistent && f.a == sub)
        answer.proven = true;
    }
  }
  if (reached.count(super)) answer.proven = true;
  return answer;
}

// ── State serialization ─────────────────────────────────────────────────────

std::string to_json(const DatabaseState& b, bool pretty) {
  nlohmann::json j;
  j["domain"] = std::vector<int>(b.domain.begin(), b.domain.end());
  j["entities"] = nlohmann::json::object();
  for (const auto& [e, ext] : b.entityExt)
    j["entities"][e] = std::vector<int>(ext.begin(), ext.end());
  j["attrs"] = nlohmann::json::object();
  for (const auto& [a, pairs] : b.attrExt) {
    auto& list = j["attrs"][a] = nlohmann::json::array();
    for (const auto& [d, v] : pairs) list.push_back({d, v});
  }
  j["rels"] = nlohmann::json::object();
  for (const auto& [r, tuples] : b.relExt) {
    auto& list = j["rels"][r] = nlohmann::json::array();
    for (const auto& t : tuples) {
      nlohmann::json obj = nlohmann::json::object();
      for (const auto& [u, d] : t.assignments) obj[u] = d;
      list.push_back(std::move(obj));
    }
  }
  return pretty ? j.dump(2) : j.dump();
}

DatabaseState state_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("bad state JSON: ") + e.what());
  }
  try {
    DatabaseState b;
    for (const auto& d : j.at("domain")) b.domain.insert(d.get<int>());
    if (j.contains("entities"))
      for (const auto& [e, list] : j.at("entities").items())
        for (const auto& d : list) b.entityExt[e].insert(d.get<int>());
    if (j.contains("attrs"))
      for (const auto& [a, list] : j.at("attrs").items())
        for (const auto& pair : list) {
          if (!pair.is_array() || pair.size() != 2)
            throw ParseError("attribute entry must be [individual, value]");
          b.attrExt[a].insert(
              {pair.at(0).get<int>(), pair.at(1).get<std::string>()});
        }
    if (j.contains("rels"))
      for (const auto& [r, list] : j.at("rels").items())
        for (const auto& obj : list) {
          LabeledTuple t;
          for (const auto& [u, d] : obj.items())
            t.assignments[u] = d.get<int>();
          b.relExt[r].insert(std::move(t));
        }
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad state JSON: ") + e.what());
  }
}

}  // namespace aluni
