#include "aluni/oo.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <optional>

#include <nlohmann/json.hpp>

#include "aluni/diagnostics.hpp"
#include "lexer.hpp"

namespace aluni {

namespace {

constexpr std::array<std::string_view, 3> kReservedClasses = {
    "AbstractClass", "RecType", "SetType"};
constexpr std::array<std::string_view, 2> kReservedRoles = {"value", "member"};

bool reserved_class(std::string_view s) {
  return std::find(kReservedClasses.begin(), kReservedClasses.end(), s) !=
         kReservedClasses.end();
}

bool reserved_role(std::string_view s) {
  return std::find(kReservedRoles.begin(), kReservedRoles.end(), s) !=
         kReservedRoles.end();
}

}  // namespace

// ── Structural types ────────────────────────────────────────────────────────

TypePtr TypeExpr::class_ref(std::string name) {
  auto node = std::shared_ptr<TypeExpr>(new TypeExpr());
  node->kind_ = Kind::ClassRef;
  node->name_ = std::move(name);
  return node;
}

TypePtr TypeExpr::union_of(std::vector<TypePtr> branches) {
  if (branches.empty()) throw Error("a union needs at least one branch");
  if (branches.size() == 1) return branches.front();
  auto node = std::shared_ptr<TypeExpr>(new TypeExpr());
  node->kind_ = Kind::Union;
  node->parts_ = std::move(branches);
  return node;
}

TypePtr TypeExpr::set_of(TypePtr element) {
  auto node = std::shared_ptr<TypeExpr>(new TypeExpr());
  node->kind_ = Kind::SetOf;
  node->parts_.push_back(std::move(element));
  return node;
}

TypePtr TypeExpr::record(std::vector<std::string> labels,
                         std::vector<TypePtr> types) {
  if (labels.empty() || labels.size() != types.size())
    throw Error("a record needs at least one labeled component");
  std::vector<std::size_t> order(labels.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return labels[a] < labels[b];
  });
  auto node = std::shared_ptr<TypeExpr>(new TypeExpr());
  node->kind_ = Kind::Record;
  for (std::size_t k : order) {
    if (!node->labels_.empty() && node->labels_.back() == labels[k])
      throw Error("duplicate record label '" + labels[k] + "'");
    node->labels_.push_back(labels[k]);
    node->parts_.push_back(types[k]);
  }
  return node;
}

bool TypeExpr::equals(const TypeExpr& other) const {
  if (kind_ != other.kind_ || name_ != other.name_ ||
      labels_ != other.labels_ || parts_.size() != other.parts_.size())
    return false;
  for (std::size_t k = 0; k < parts_.size(); ++k)
    if (!parts_[k]->equals(*other.parts_[k])) return false;
  return true;
}

std::string TypeExpr::render() const {
  switch (kind_) {
    case Kind::ClassRef:
      return name_;
    case Kind::Union: {
      std::string out = "Union ";
      for (std::size_t k = 0; k < parts_.size(); ++k) {
        if (k) out += ", ";
        out += parts_[k]->render();
      }
      return out + " End";
    }
    case Kind::SetOf:
      return "Set-of " + parts_.front()->render();
    case Kind::Record: {
      std::string out = "Record ";
      for (std::size_t k = 0; k < parts_.size(); ++k) {
        if (k) out += ", ";
        out += labels_[k] + ": " + parts_[k]->render();
      }
      return out + " End";
    }
  }
  return {};
}

// ── Values ──────────────────────────────────────────────────────────────────

Value Value::oid(std::string name) {
  Value v;
  v.kind_ = Kind::Oid;
  v.name_ = std::move(name);
  return v;
}

Value Value::set_val(std::vector<Value> elements) {
  Value v;
  v.kind_ = Kind::Set;
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()),
                 elements.end());
  v.children_ = std::move(elements);
  return v;
}

Value Value::rec_val(std::vector<std::string> labels,
                     std::vector<Value> values) {
  if (labels.size() != values.size())
    throw Error("record labels and values must run in parallel");
  std::vector<std::size_t> order(labels.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return labels[a] < labels[b];
  });
  Value v;
  v.kind_ = Kind::Rec;
  for (std::size_t k : order) {
    if (!v.labels_.empty() && v.labels_.back() == labels[k])
      throw Error("duplicate record label '" + labels[k] + "'");
    v.labels_.push_back(labels[k]);
    v.children_.push_back(values[k]);
  }
  return v;
}

const Value* Value::field(const std::string& label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) return nullptr;
  return &children_[static_cast<std::size_t>(it - labels_.begin())];
}

bool Value::operator==(const Value& other) const {
  return kind_ == other.kind_ && name_ == other.name_ &&
         labels_ == other.labels_ && children_ == other.children_;
}

bool Value::operator<(const Value& other) const {
  if (kind_ != other.kind_)
    return static_cast<int>(kind_) < static_cast<int>(other.kind_);
  switch (kind_) {
    case Kind::Oid:
      return name_ < other.name_;
    case Kind::Set:
      return children_ < other.children_;
    case Kind::Rec:
      if (labels_ != other.labels_) return labels_ < other.labels_;
      return children_ < other.children_;
  }
  return false;
}

std::string Value::render() const {
  switch (kind_) {
    case Kind::Oid:
      return name_;
    case Kind::Set: {
      std::string out = "{";
      for (std::size_t k = 0; k < children_.size(); ++k) {
        if (k) out += ", ";
        out += children_[k].render();
      }
      return out + "}";
    }
    case Kind::Rec: {
      std::string out = "[";
      for (std::size_t k = 0; k < children_.size(); ++k) {
        if (k) out += ", ";
        out += labels_[k] + ": " + children_[k].render();
      }
      return out + "]";
    }
  }
  return {};
}

// ── Parsing ─────────────────────────────────────────────────────────────────

namespace {

using detail::Lexer;

constexpr std::array<std::string_view, 7> kOosKeywords = {
    "Class", "is-a", "type-is", "Union", "Set-of", "Record", "End"};

bool oos_keyword(std::string_view s) {
  return std::find(kOosKeywords.begin(), kOosKeywords.end(), s) !=
         kOosKeywords.end();
}

class OosParser {
public:
  explicit OosParser(const std::string& text)
      : lex_(text, /*hyphen_idents=*/true) {}

  OOSchema parse_file() {
    while (!lex_.at_end()) {
      lex_.expect("Class");
      std::string name = class_name();
      if (s_.decls.count(name))
        lex_.fail("duplicate declaration of class '" + name + "'");
      OODeclaration decl;
      if (lex_.accept("is-a")) {
        do {
          decl.supers.push_back(class_name());
        } while (lex_.accept(","));
      }
      lex_.expect("type-is");
      decl.type = parse_type();
      s_.decls.emplace(std::move(name), std::move(decl));
    }
    return s_;
  }

  TypePtr parse_single_type() {
    TypePtr t = parse_type();
    if (!lex_.at_end())
      lex_.fail("unexpected trailing input: " + lex_.describe());
    return t;
  }

private:
  TypePtr parse_type() {
    if (lex_.accept("Union")) {
      std::vector<TypePtr> branches;
      do {
        branches.push_back(parse_type());
      } while (lex_.accept(","));
      lex_.expect("End");
      return TypeExpr::union_of(std::move(branches));
    }
    if (lex_.accept("Set-of")) return TypeExpr::set_of(parse_type());
    if (lex_.accept("Record")) {
      if (lex_.peek().is("End"))
        lex_.fail("a Record needs at least one labeled component");
      std::vector<std::string> labels;
      std::vector<TypePtr> types;
      do {
        std::string label = label_name();
        if (std::find(labels.begin(), labels.end(), label) != labels.end())
          lex_.fail("duplicate record label '" + label + "'");
        lex_.expect(":");
        labels.push_back(std::move(label));
        types.push_back(parse_type());
      } while (lex_.accept(","));
      lex_.expect("End");
      return TypeExpr::record(std::move(labels), std::move(types));
    }
    return TypeExpr::class_ref(class_name());
  }

  std::string class_name() {
    std::string name = lex_.expect_ident("class name");
    if (oos_keyword(name)) lex_.fail("reserved word used as name: " + name);
    if (reserved_class(name))
      lex_.fail("'" + name + "' is reserved and cannot name a class");
    s_.classNames.insert(name);
    return name;
  }

  std::string label_name() {
    std::string name = lex_.expect_ident("record label");
    if (oos_keyword(name)) lex_.fail("reserved word used as name: " + name);
    if (reserved_role(name))
      lex_.fail("'" + name + "' is reserved and cannot label a component");
    s_.attrNames.insert(name);
    return name;
  }

  Lexer lex_;
  OOSchema s_;
};

}  // namespace

OOSchema parse_oo(const std::string& text) {
  return OosParser(text).parse_file();
}

TypePtr parse_type_expr(const std::string& text) {
  return OosParser(text).parse_single_type();
}

std::string render_oo(const OOSchema& s) {
  std::string out;
  for (const auto& [name, decl] : s.decls) {
    out += "Class " + name;
    if (!decl.supers.empty()) {
      out += " is-a ";
      for (std::size_t k = 0; k < decl.supers.size(); ++k) {
        if (k) out += ", ";
        out += decl.supers[k];
      }
    }
    out += " type-is " + decl.type->render() + "\n";
  }
  return out;
}

// ── Depth ───────────────────────────────────────────────────────────────────

unsigned type_depth(const TypeExpr& t) {
  switch (t.kind()) {
    case TypeExpr::Kind::ClassRef:
      return 0;
    case TypeExpr::Kind::Union: {
      unsigned depth = 0;
      for (const auto& part : t.parts())
        depth = std::max(depth, type_depth(*part));
      return depth;
    }
    case TypeExpr::Kind::SetOf:
      return 1 + type_depth(*t.parts().front());
    case TypeExpr::Kind::Record: {
      unsigned depth = 0;
      for (const auto& part : t.parts())
        depth = std::max(depth, type_depth(*part));
      return 1 + depth;
    }
  }
  return 0;
}

unsigned schema_depth(const OOSchema& s) {
  unsigned depth = 0;
  for (const auto& [name, decl] : s.decls) {
    (void)name;
    depth = std::max(depth, type_depth(*decl.type));
  }
  return depth;
}

// ── Instances ───────────────────────────────────────────────────────────────

std::set<Value> active_values(const OOInstance& j) {
  for (const auto& [o, v] : j.rho) {
    (void)v;
    if (!j.oids.count(o))
      throw SignatureError("ρ assigns a value to unknown oid '" + o + "'");
  }
  for (const auto& o : j.oids)
    if (!j.rho.count(o))
      throw SignatureError("ρ lacks a value for oid '" + o + "'");
  for (const auto& [c, ext] : j.pi)
    for (const auto& o : ext)
      if (!j.oids.count(o))
        throw SignatureError("π(" + c + ") contains unknown oid '" + o + "'");

  std::set<Value> out;
  std::vector<Value> stack;
  for (const auto& o : j.oids) out.insert(Value::oid(o));
  for (const auto& [o, v] : j.rho) {
    (void)o;
    stack.push_back(v);
  }
  while (!stack.empty()) {
    Value v = std::move(stack.back());
    stack.pop_back();
    if (!out.insert(v).second) continue;
    for (const auto& child : v.children()) stack.push_back(child);
  }
  return out;
}

bool type_member(const TypeExpr& t, const Value& v, const OOInstance& j) {
  switch (t.kind()) {
    case TypeExpr::Kind::ClassRef: {
      if (v.kind() != Value::Kind::Oid) return false;
      auto it = j.pi.find(t.class_name());
      return it != j.pi.end() && it->second.count(v.oid_name()) != 0;
    }
    case TypeExpr::Kind::Union:
      for (const auto& part : t.parts())
        if (type_member(*part, v, j)) return true;
      return false;
    case TypeExpr::Kind::SetOf: {
      if (v.kind() != Value::Kind::Set) return false;
      for (const auto& element : v.children())
        if (!type_member(*t.parts().front(), element, j)) return false;
      return true;
    }
    case TypeExpr::Kind::Record: {
      if (v.kind() != Value::Kind::Rec) return false;
      for (std::size_t k = 0; k < t.labels().size(); ++k) {
        const Value* component = v.field(t.labels()[k]);
        if (component == nullptr) return false;
        if (!type_member(*t.parts()[k], *component, j)) return false;
      }
      return true;
    }
  }
  return false;
}

InstanceReport check_legal_instance(const OOSchema& s, const OOInstance& j) {
  active_values(j);  // structural validation
  for (const auto& [c, ext] : j.pi) {
    (void)ext;
    if (!s.classNames.count(c))
      throw SignatureError("π mentions unknown class '" + c + "'");
  }

  InstanceReport report;
  report.ok = true;
  auto fail = [&](std::string msg) {
    report.ok = false;
    report.violations.push_back(std::move(msg));
  };
  auto ext = [&](const std::string& c) -> const std::set<std::string>& {
    static const std::set<std::string> empty;
    auto it = j.pi.find(c);
    return it == j.pi.end() ? empty : it->second;
  };

  for (const auto& [c, decl] : s.decls) {
    for (const auto& super : decl.supers) {
      const auto& supExt = ext(super);
      for (const auto& o : ext(c))
        if (!supExt.count(o)) {
          fail("is-a: oid '" + o + "' is in " + c + " but not in " + super);
          break;
        }
    }
    for (const auto& o : ext(c))
      if (!type_member(*decl.type, j.rho.at(o), j))
        fail("type: the value of oid '" + o + "' does not belong to the "
             "declared type of " + c);
  }
  return report;
}

// ── ψ translation ───────────────────────────────────────────────────────────

ConceptPtr psi_type(const TypeExpr& t) {
  switch (t.kind()) {
    case TypeExpr::Kind::ClassRef:
      return ConceptExpr::atomic(t.class_name());
    case TypeExpr::Kind::Union: {
      std::vector<ConceptPtr> branches;
      for (const auto& part : t.parts()) branches.push_back(psi_type(*part));
      return ConceptExpr::disj(std::move(branches));
    }
    case TypeExpr::Kind::SetOf:
      return ConceptExpr::conj(
          {ConceptExpr::atomic("SetType"),
           ConceptExpr::forall(RoleExpr("member"),
                               psi_type(*t.parts().front()))});
    case TypeExpr::Kind::Record: {
      std::vector<ConceptPtr> parts{ConceptExpr::atomic("RecType")};
      for (std::size_t k = 0; k < t.labels().size(); ++k) {
        RoleExpr attr(t.labels()[k]);
        parts.push_back(ConceptExpr::forall(attr, psi_type(*t.parts()[k])));
        parts.push_back(ConceptExpr::exactly(1, attr));
      }
      return ConceptExpr::conj(std::move(parts));
    }
  }
  return ConceptExpr::top();
}

KnowledgeBase translate_psi(const OOSchema& s) {
  KnowledgeBase kb;
  kb.add_concept("AbstractClass");
  kb.add_concept("RecType");
  kb.add_concept("SetType");
  for (const auto& c : s.classNames) kb.add_concept(c);
  kb.add_role("value");
  kb.add_role("member");
  for (const auto& a : s.attrNames) kb.add_role(a);

  RoleExpr value("value");
  kb.assertions.push_back({"AbstractClass", ConceptExpr::exactly(1, value)});
  kb.assertions.push_back(
      {"RecType", ConceptExpr::forall(value, ConceptExpr::bottom())});
  kb.assertions.push_back(
      {"SetType",
       ConceptExpr::conj({ConceptExpr::forall(value, ConceptExpr::bottom()),
                          ConceptExpr::neg_atomic("RecType")})});

  for (const auto& [c, decl] : s.decls) {
    std::vector<ConceptPtr> parts{ConceptExpr::atomic("AbstractClass")};
    for (const auto& super : decl.supers)
      parts.push_back(ConceptExpr::atomic(super));
    parts.push_back(ConceptExpr::forall(value, psi_type(*decl.type)));
    kb.assertions.push_back({c, ConceptExpr::conj(std::move(parts))});
  }
  return kb;
}

// ── Bad cycles ──────────────────────────────────────────────────────────────

namespace {

void require_signature(const KnowledgeBase& kb, const Interpretation& i) {
  for (const auto& c : kb.concepts)
    if (!i.concepts.count(c))
      throw SignatureError("interpretation lacks concept '" + c + "'");
  for (const auto& r : kb.roles)
    if (!i.roles.count(r))
      throw SignatureError("interpretation lacks role '" + r + "'");
}

std::set<int> duplicable_individuals(const Interpretation& i) {
  std::set<int> out;
  auto it = i.concepts.find("RecType");
  if (it != i.concepts.end()) out.insert(it->second.begin(), it->second.end());
  it = i.concepts.find("SetType");
  if (it != i.concepts.end()) out.insert(it->second.begin(), it->second.end());
  return out;
}

}  // namespace

std::vector<BadCycle> find_bad_cycles(const OOSchema& s,
                                      const Interpretation& i) {
  require_signature(translate_psi(s), i);
  const std::set<int> duplicable = duplicable_individuals(i);

  std::map<int, std::vector<int>> fwd, rev;
  for (int d : duplicable) {
    fwd[d];
    rev[d];
  }
  for (const auto& [role, pairs] : i.roles) {
    if (role == "value") continue;
    for (const auto& [x, y] : pairs)
      if (duplicable.count(x) && duplicable.count(y)) {
        fwd[x].push_back(y);
        rev[y].push_back(x);
      }
  }

  // Kosaraju: forward finish order, then components on the transpose.
  std::vector<int> order;
  std::set<int> seen;
  for (int start : duplicable) {
    if (seen.count(start)) continue;
    seen.insert(start);
    std::vector<std::pair<int, std::size_t>> stack{{start, 0}};
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const auto& out = fwd.at(node);
      if (next < out.size()) {
        int target = out[next++];
        if (seen.insert(target).second) stack.push_back({target, 0});
      } else {
        order.push_back(node);
        stack.pop_back();
      }
    }
  }

  std::set<int> assigned;
  std::vector<BadCycle> cycles;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (assigned.count(*it)) continue;
    std::set<int> component;
    std::vector<int> stack{*it};
    assigned.insert(*it);
    while (!stack.empty()) {
      int node = stack.back();
      stack.pop_back();
      component.insert(node);
      for (int target : rev.at(node))
        if (assigned.insert(target).second) stack.push_back(target);
    }

    BadCycle cycle;
    for (const auto& [role, pairs] : i.roles) {
      if (role == "value") continue;
      for (const auto& [x, y] : pairs)
        if (component.count(x) && component.count(y))
          cycle.edges.push_back({x, role, y});
    }
    if (cycle.edges.empty()) continue;  // trivial component, no cycle
    cycle.members.assign(component.begin(), component.end());
    std::sort(cycle.edges.begin(), cycle.edges.end());
    cycles.push_back(std::move(cycle));
  }
  std::sort(cycles.begin(), cycles.end(),
            [](const BadCycle& a, const BadCycle& b) {
              return a.members.front() < b.members.front();
            });
  return cycles;
}

// ── m-unfolding ─────────────────────────────────────────────────────────────

Interpretation unfold(const OOSchema& s, const Interpretation& i, unsigned m) {
  auto cycles = find_bad_cycles(s, i);
  if (cycles.empty()) return i;

  std::set<int> roots;
  for (const auto& cycle : cycles)
    roots.insert(cycle.members.begin(), cycle.members.end());
  const std::set<int> duplicable = duplicable_individuals(i);

  Interpretation out = i;
  int next = i.domain;
  struct Pending {
    int original;
    int copy;
    unsigned depth;
  };
  std::vector<Pending> queue;

  // Redirect every structural out-edge of a root into a fresh copy of
  // its target (dropped outright when m = 0).
  for (int root : roots) {
    for (auto& [role, pairs] : out.roles) {
      if (role == "value") continue;
      std::vector<int> targets;
      for (const auto& [x, y] : pairs)
        if (x == root && duplicable.count(y)) targets.push_back(y);
      for (int y : targets) {
        pairs.erase({root, y});
        if (m >= 1) {
          int copy = next++;
          pairs.insert({root, copy});
          queue.push_back({y, copy, 1});
        }
      }
    }
  }

  // Breadth-first tree expansion with per-path copies, truncated at m.
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Pending p = queue[head];
    for (const auto& [name, ext] : i.concepts)
      if (name != "AbstractClass" && ext.count(p.original))
        out.concepts[name].insert(p.copy);
    for (const auto& [role, pairs] : i.roles) {
      for (const auto& [x, y] : pairs) {
        if (x != p.original) continue;
        if (role == "value" || !duplicable.count(y)) {
          out.roles[role].insert({p.copy, y});
        } else if (p.depth < m) {
          int copy = next++;
          out.roles[role].insert({p.copy, copy});
          queue.push_back({y, copy, p.depth + 1});
        }
      }
    }
  }
  out.domain = next;
  return out;
}

// ── α: instance → interpretation ────────────────────────────────────────────

Interpretation alpha_oo(const OOSchema& s, const OOInstance& j) {
  for (const auto& [c, ext] : j.pi) {
    (void)ext;
    if (!s.classNames.count(c))
      throw SignatureError("π mentions unknown class '" + c + "'");
  }
  const std::set<Value> values = active_values(j);

  std::map<Value, int> indexOf;
  Interpretation i;
  for (const auto& v : values) indexOf.emplace(v, i.domain++);

  auto& abstract = i.concepts["AbstractClass"];
  auto& records = i.concepts["RecType"];
  auto& sets = i.concepts["SetType"];
  for (const auto& c : s.classNames) i.concepts[c];
  i.roles["value"];
  i.roles["member"];
  for (const auto& a : s.attrNames) i.roles[a];

  for (const auto& [v, index] : indexOf) {
    switch (v.kind()) {
      case Value::Kind::Oid:
        abstract.insert(index);
        break;
      case Value::Kind::Set:
        sets.insert(index);
        for (const auto& element : v.children())
          i.roles["member"].insert({index, indexOf.at(element)});
        break;
      case Value::Kind::Rec:
        records.insert(index);
        for (std::size_t k = 0; k < v.labels().size(); ++k)
          i.roles[v.labels()[k]].insert(
              {index, indexOf.at(v.children()[k])});
        break;
    }
  }
  for (const auto& [c, ext] : j.pi)
    for (const auto& o : ext)
      i.concepts[c].insert(indexOf.at(Value::oid(o)));
  for (const auto& [o, v] : j.rho)
    i.roles["value"].insert({indexOf.at(Value::oid(o)), indexOf.at(v)});
  return i;
}

// ── β: interpretation → instance ────────────────────────────────────────────

OOBetaResult beta_oo(const OOSchema& s, const Interpretation& i) {
  for (const auto& [name, ext] : i.concepts)
    for (int d : ext)
      if (d < 0 || d >= i.domain)
        throw SignatureError("individual " + std::to_string(d) +
                             " in concept '" + name + "' is out of range");
  for (const auto& [name, pairs] : i.roles)
    for (const auto& [x, y] : pairs)
      if (x < 0 || x >= i.domain || y < 0 || y >= i.domain)
        throw SignatureError("pair in role '" + name + "' is out of range");

  const Interpretation u = unfold(s, i, schema_depth(s));
  OOBetaResult out;
  auto note = [&](std::string msg) { out.notes.push_back(std::move(msg)); };

  // Classification precedence: object, then record, then set.
  enum class Cls : std::uint8_t { None, OidLike, Rec, Set };
  std::vector<Cls> cls(static_cast<std::size_t>(u.domain), Cls::None);
  const auto& abstract = u.concepts.at("AbstractClass");
  for (int d : abstract) cls[static_cast<std::size_t>(d)] = Cls::OidLike;
  for (const auto& c : s.classNames)
    for (int d : u.concepts.at(c))
      if (cls[static_cast<std::size_t>(d)] == Cls::None) {
        cls[static_cast<std::size_t>(d)] = Cls::OidLike;
        note("individual " + std::to_string(d) + " is in class '" + c +
             "' but not in AbstractClass; treated as an object");
      }
  for (int d : u.concepts.at("RecType"))
    if (cls[static_cast<std::size_t>(d)] == Cls::None)
      cls[static_cast<std::size_t>(d)] = Cls::Rec;
  for (int d : u.concepts.at("SetType"))
    if (cls[static_cast<std::size_t>(d)] == Cls::None)
      cls[static_cast<std::size_t>(d)] = Cls::Set;

  auto oid_name = [](int d) { return "o" + std::to_string(d); };
  auto successors = [&](const std::string& role, int d) {
    std::set<int> out_;
    for (const auto& [x, y] : u.roles.at(role))
      if (x == d) out_.insert(y);
    return out_;
  };

  // Fold structured individuals bottom-up; bad cycles are gone, so the
  // recursion runs over a finite dag.
  std::vector<std::optional<Value>> memo(static_cast<std::size_t>(u.domain));
  std::function<Value(int)> fold = [&](int d) -> Value {
    auto& slot = memo[static_cast<std::size_t>(d)];
    if (slot) return *slot;
    Value v = Value::oid(oid_name(d));
    switch (cls[static_cast<std::size_t>(d)]) {
      case Cls::OidLike:
        break;
      case Cls::Rec: {
        std::vector<std::string> labels;
        std::vector<Value> components;
        for (const auto& [role, pairs] : u.roles) {
          (void)pairs;
          if (role == "value" || role == "member") continue;
          std::set<int> fillers = successors(role, d);
          if (fillers.empty()) continue;
          if (fillers.size() > 1)
            note("record individual " + std::to_string(d) +
                 " has several fillers for '" + role +
                 "'; least index chosen");
          labels.push_back(role);
          components.push_back(fold(*fillers.begin()));
        }
        v = Value::rec_val(std::move(labels), std::move(components));
        break;
      }
      case Cls::Set: {
        std::vector<Value> elements;
        for (int y : successors("member", d)) elements.push_back(fold(y));
        v = Value::set_val(std::move(elements));
        break;
      }
      case Cls::None:
        note("individual " + std::to_string(d) +
             " is neither object nor structured value; folded as an "
             "empty record");
        v = Value::rec_val({}, {});
        break;
    }
    slot = v;
    return v;
  };

  for (int d = 0; d < u.domain; ++d) {
    if (cls[static_cast<std::size_t>(d)] != Cls::OidLike) continue;
    std::string o = oid_name(d);
    out.instance.oids.insert(o);
    std::set<int> assigned = successors("value", d);
    if (assigned.empty()) {
      note("object " + std::to_string(d) +
           " has no value; assigned the empty set");
      out.instance.rho.emplace(o, Value::set_val({}));
    } else {
      if (assigned.size() > 1)
        note("object " + std::to_string(d) +
             " has several values; least index chosen");
      out.instance.rho.emplace(o, fold(*assigned.begin()));
    }
  }
  for (const auto& c : s.classNames) {
    auto& target = out.instance.pi[c];
    for (int d : u.concepts.at(c))
      if (cls[static_cast<std::size_t>(d)] == Cls::OidLike)
        target.insert(oid_name(d));
  }
  return out;
}

// ── Renaming and canonical form ─────────────────────────────────────────────

namespace {

Value rename_value(const Value& v,
                   const std::map<std::string, std::string>& renaming) {
  switch (v.kind()) {
    case Value::Kind::Oid: {
      auto it = renaming.find(v.oid_name());
      return it == renaming.end() ? v : Value::oid(it->second);
    }
    case Value::Kind::Set: {
      std::vector<Value> elements;
      for (const auto& element : v.children())
        elements.push_back(rename_value(element, renaming));
      return Value::set_val(std::move(elements));
    }
    case Value::Kind::Rec: {
      std::vector<Value> components;
      for (const auto& component : v.children())
        components.push_back(rename_value(component, renaming));
      return Value::rec_val(v.labels(), std::move(components));
    }
  }
  return v;
}

}  // namespace

OOInstance rename_oids(const OOInstance& j,
                       const std::map<std::string, std::string>& renaming) {
  auto renamed = [&](const std::string& o) {
    auto it = renaming.find(o);
    return it == renaming.end() ? o : it->second;
  };
  OOInstance out;
  for (const auto& o : j.oids) out.oids.insert(renamed(o));
  for (const auto& [c, ext] : j.pi) {
    auto& target = out.pi[c];
    for (const auto& o : ext) target.insert(renamed(o));
  }
  for (const auto& [o, v] : j.rho)
    out.rho.emplace(renamed(o), rename_value(v, renaming));
  return out;
}

OOInstance canonical_instance(const OOSchema& s, const OOInstance& j) {
  active_values(j);  // structural validation
  for (const auto& [c, ext] : j.pi) {
    (void)ext;
    if (!s.classNames.count(c))
      throw SignatureError("π mentions unknown class '" + c + "'");
  }
  std::map<std::string, std::string> renaming;
  for (const auto& o : j.oids)
    renaming[o] = "o" + std::to_string(renaming.size());
  OOInstance out = rename_oids(j, renaming);
  for (const auto& c : s.classNames) out.pi[c];
  return out;
}

// ── Reasoning services ──────────────────────────────────────────────────────

namespace {

void require_type_names(const OOSchema& s, const TypeExpr& t) {
  switch (t.kind()) {
    case TypeExpr::Kind::ClassRef:
      if (!s.classNames.count(t.class_name()))
        throw SignatureError("unknown class '" + t.class_name() + "'");
      return;
    case TypeExpr::Kind::Record:
      for (const auto& label : t.labels())
        if (!s.attrNames.count(label))
          throw SignatureError("unknown attribute '" + label + "'");
      [[fallthrough]];
    case TypeExpr::Kind::Union:
    case TypeExpr::Kind::SetOf:
      for (const auto& part : t.parts()) require_type_names(s, *part);
      return;
  }
}

}  // namespace

ReasoningVerdict oo_type_consistent(const OOSchema& s, const TypePtr& t,
                                    const SearchBudget& budget) {
  require_type_names(s, *t);
  return find_model(translate_psi(s), psi_type(*t), budget);
}

ReasoningVerdict oo_subtype(const OOSchema& s, const TypePtr& t,
                            const TypePtr& tPrime,
                            const SearchBudget& budget) {
  require_type_names(s, *t);
  require_type_names(s, *tPrime);
  return subsumption_counterexample(translate_psi(s), psi_type(*t),
                                    psi_type(*tPrime), budget);
}

// ── Serialization ───────────────────────────────────────────────────────────

namespace {

nlohmann::json value_to_json(const Value& v) {
  nlohmann::json j;
  switch (v.kind()) {
    case Value::Kind::Oid:
      j["oid"] = v.oid_name();
      break;
    case Value::Kind::Set: {
      auto list = nlohmann::json::array();
      for (const auto& element : v.children())
        list.push_back(value_to_json(element));
      j["set"] = std::move(list);
      break;
    }
    case Value::Kind::Rec: {
      auto fields = nlohmann::json::object();
      for (std::size_t k = 0; k < v.labels().size(); ++k)
        fields[v.labels()[k]] = value_to_json(v.children()[k]);
      j["rec"] = std::move(fields);
      break;
    }
  }
  return j;
}

Value value_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.size() != 1)
    throw ParseError("a value must be a one-key object tagged "
                     "\"oid\", \"set\" or \"rec\"");
  if (j.contains("oid")) return Value::oid(j.at("oid").get<std::string>());
  if (j.contains("set")) {
    std::vector<Value> elements;
    for (const auto& element : j.at("set"))
      elements.push_back(value_from_json(element));
    return Value::set_val(std::move(elements));
  }
  if (j.contains("rec")) {
    std::vector<std::string> labels;
    std::vector<Value> components;
    for (const auto& [label, component] : j.at("rec").items()) {
      labels.push_back(label);
      components.push_back(value_from_json(component));
    }
    return Value::rec_val(std::move(labels), std::move(components));
  }
  throw ParseError("unknown value tag in instance JSON");
}

}  // namespace

std::string to_json(const OOInstance& j, bool pretty) {
  nlohmann::json out;
  out["oids"] = std::vector<std::string>(j.oids.begin(), j.oids.end());
  out["pi"] = nlohmann::json::object();
  for (const auto& [c, ext] : j.pi)
    out["pi"][c] = std::vector<std::string>(ext.begin(), ext.end());
  out["rho"] = nlohmann::json::object();
  for (const auto& [o, v] : j.rho) out["rho"][o] = value_to_json(v);
  return pretty ? out.dump(2) : out.dump();
}

OOInstance instance_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("bad instance JSON: ") + e.what());
  }
  try {
    OOInstance out;
    for (const auto& o : j.at("oids")) out.oids.insert(o.get<std::string>());
    if (j.contains("pi"))
      for (const auto& [c, list] : j.at("pi").items())
        for (const auto& o : list) out.pi[c].insert(o.get<std::string>());
    if (j.contains("rho"))
      for (const auto& [o, v] : j.at("rho").items())
        out.rho.emplace(o, value_from_json(v));
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad instance JSON: ") + e.what());
  }
}

}  // namespace aluni
