#include "aluni/cardinality.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include <nlohmann/json.hpp>

namespace aluni {

// ── Fact ordering and display ───────────────────────────────────────────────

bool CardinalityFact::operator<(const CardinalityFact& o) const {
  auto key = [](const CardinalityFact& f) {
    return std::tie(f.kind, f.a, f.b, f.m, f.n);
  };
  return key(*this) < key(o);
}

std::string CardinalityFact::describe() const {
  switch (kind) {
    case FactKind::Inequality:
      return std::to_string(m) + "*#" + a + " <= " + std::to_string(n) + "*#" +
             b;
    case FactKind::Subset:
      return a + " subset-of " + b;
    case FactKind::FiniteSubsumption:
      return a + " finitely-subsumed-by " + b;
    case FactKind::FiniteInconsistent:
      return a + " finitely-inconsistent";
  }
  return {};
}

std::string to_json(const std::vector<CardinalityFact>& facts, bool pretty) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : facts) {
    nlohmann::json j;
    switch (f.kind) {
      case FactKind::Inequality:
        j["kind"] = "inequality";
        j["m"] = f.m;
        j["n"] = f.n;
        break;
      case FactKind::Subset:
        j["kind"] = "subset";
        break;
      case FactKind::FiniteSubsumption:
        j["kind"] = "finite-subsumption";
        break;
      case FactKind::FiniteInconsistent:
        j["kind"] = "finite-inconsistent";
        break;
    }
    j["a"] = f.a;
    if (f.kind != FactKind::FiniteInconsistent) j["b"] = f.b;
    j["rule"] = f.rule;
    j["derivation"] = f.derivation;
    j["text"] = f.describe();
    arr.push_back(std::move(j));
  }
  return pretty ? arr.dump(2) : arr.dump();
}

// ── Analyzer ────────────────────────────────────────────────────────────────

namespace {

/// A top-level conjunct of some assertion, tagged with its origin.
struct Conjunct {
  const ConceptExpr* expr;
  std::size_t assertionIndex;
};

/// Flattens the top level of an expression into conjuncts (recursing only
/// through ⊓, never under ⊔/∀).
void top_conjuncts(const ConceptExpr& c, std::size_t origin,
                   std::vector<Conjunct>& out) {
  if (c.kind() == ConceptKind::And) {
    for (const auto& part : c.parts()) top_conjuncts(*part, origin, out);
  } else {
    out.push_back({&c, origin});
  }
}

std::vector<std::size_t> merge_derivations(const std::vector<std::size_t>& x,
                                           const std::vector<std::size_t>& y) {
  std::set<std::size_t> s(x.begin(), x.end());
  s.insert(y.begin(), y.end());
  return {s.begin(), s.end()};
}

/// Key for Inequality dedup: the reduced pair (m, n) with the concepts.
struct IneqKey {
  std::string a, b;
  long long m, n;
  bool operator<(const IneqKey& o) const {
    return std::tie(a, b, m, n) < std::tie(o.a, o.b, o.m, o.n);
  }
};

void reduce(long long& m, long long& n) {
  long long g = std::gcd(m, n);
  if (g > 1) {
    m /= g;
    n /= g;
  }
}

}  // namespace

std::vector<CardinalityFact> analyze_cardinalities(const KnowledgeBase& k) {
  // Per-concept top-level conjuncts of all its assertions.
  std::map<std::string, std::vector<Conjunct>> conjuncts;
  for (const auto& name : k.concepts) conjuncts[name];
  for (std::size_t i = 0; i < k.assertions.size(); ++i)
    top_conjuncts(*k.assertions[i].rhs, i, conjuncts[k.assertions[i].lhs]);

  // ── R1: subsets from atomic conjuncts ─────────────────────────────────
  std::vector<CardinalityFact> subsets;
  {
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& [a, cs] : conjuncts)
      for (const auto& c : cs)
        if (c.expr->kind() == ConceptKind::Atomic &&
            seen.insert({a, c.expr->atom_name()}).second) {
          CardinalityFact f;
          f.kind = FactKind::Subset;
          f.a = a;
          f.b = c.expr->atom_name();
          f.rule = "R1";
          f.derivation = {c.assertionIndex};
          subsets.push_back(std::move(f));
        }
  }

  // ── R2: inequalities from number restrictions across a role ───────────
  //
  //  A ⊑ ∃≥m R ⊓ ∀R.B and B ⊑ ∃≤n R⁻ give m·#A ≤ n·#B: the A-side pumps
  //  at least m R-pairs per A-instance, all landing in B, and the B-side
  //  absorbs at most n per B-instance.
  std::vector<CardinalityFact> inequalities;
  std::map<IneqKey, std::size_t> ineqIndex;  // key → position

  struct Restriction {
    // max over ∃≥· conjuncts and min over ∃≤· conjuncts per (concept, role).
    std::map<RoleExpr, std::pair<unsigned, std::vector<std::size_t>>> atLeast;
    std::map<RoleExpr, std::pair<unsigned, std::vector<std::size_t>>> atMost;
    // ∀R.B conjuncts with atomic body, per role.
    std::map<RoleExpr, std::vector<std::pair<std::string, std::size_t>>>
        forall;
  };
  std::map<std::string, Restriction> byConcept;
  for (const auto& [a, cs] : conjuncts) {
    Restriction& r = byConcept[a];
    for (const auto& c : cs) {
      switch (c.expr->kind()) {
        case ConceptKind::AtLeast: {
          auto& slot = r.atLeast[c.expr->role()];
          if (slot.second.empty() || c.expr->bound() > slot.first)
            slot = {c.expr->bound(), {c.assertionIndex}};
          break;
        }
        case ConceptKind::AtMost: {
          auto& slot = r.atMost[c.expr->role()];
          if (slot.second.empty() || c.expr->bound() < slot.first)
            slot = {c.expr->bound(), {c.assertionIndex}};
          break;
        }
        case ConceptKind::Forall: {
          if (c.expr->body()->kind() == ConceptKind::Atomic)
            r.forall[c.expr->role()].push_back(
                {c.expr->body()->atom_name(), c.assertionIndex});
          break;
        }
        default:
          break;
      }
    }
  }

  auto push_inequality = [&](long long m, const std::string& a, long long n,
                             const std::string& b, const std::string& rule,
                             std::vector<std::size_t> derivation) {
    if (m <= 0 || n <= 0) return false;  // positive coefficients only
    reduce(m, n);
    IneqKey key{a, b, m, n};
    if (ineqIndex.count(key)) return false;
    CardinalityFact f;
    f.kind = FactKind::Inequality;
    f.a = a;
    f.b = b;
    f.m = m;
    f.n = n;
    f.rule = rule;
    f.derivation = std::move(derivation);
    ineqIndex[key] = inequalities.size();
    inequalities.push_back(std::move(f));
    return true;
  };

  for (const auto& [a, ra] : byConcept) {
    for (const auto& [role, least] : ra.atLeast) {
      auto fit = ra.forall.find(role);
      if (fit == ra.forall.end()) continue;
      for (const auto& [b, forallIdx] : fit->second) {
        auto bit = byConcept.find(b);
        if (bit == byConcept.end()) continue;
        auto mit = bit->second.atMost.find(role.inverse());
        if (mit == bit->second.atMost.end()) continue;
        if (mit->second.first == 0) continue;  // n must stay positive
        std::vector<std::size_t> derivation =
            merge_derivations(least.second, {forallIdx});
        derivation = merge_derivations(derivation, mit->second.second);
        push_inequality(least.first, a, mit->second.first, b, "R2",
                        std::move(derivation));
      }
    }
  }

  // ── R3: every subset is a 1:1 inequality ──────────────────────────────
  for (const auto& s : subsets)
    push_inequality(1, s.a, 1, s.b, "R3", s.derivation);

  // ── R4: chaining with a path-length cutoff ────────────────────────────
  //
  //  Breadth-first composition over the base facts; each derived fact is
  //  kept with the length of the shortest path producing it, and paths
  //  stop at |concepts| edges.  Coefficient products that overflow are
  //  dropped (facts are only ever omitted, never weakened).
  const std::size_t cutoff = std::max<std::size_t>(k.concepts.size(), 1);
  std::size_t baseCount = inequalities.size();
  std::vector<std::size_t> lengths(baseCount, 1);
  for (std::size_t i = 0; i < inequalities.size(); ++i) {
    if (lengths[i] >= cutoff) continue;
    const CardinalityFact left = inequalities[i];  // copy: vector may grow
    for (std::size_t j = 0; j < baseCount; ++j) {
      const CardinalityFact right = inequalities[j];
      if (left.b != right.a) continue;
      long long m, n;
      if (__builtin_mul_overflow(left.m, right.m, &m)) continue;
      if (__builtin_mul_overflow(left.n, right.n, &n)) continue;
      std::vector<std::size_t> derivation =
          merge_derivations(left.derivation, right.derivation);
      if (push_inequality(m, left.a, n, right.b, "R4", std::move(derivation)))
        lengths.push_back(lengths[i] + 1);
    }
  }

  // ── R5 / R6: finite-model consequences ────────────────────────────────
  std::vector<CardinalityFact> consequences;
  std::set<std::pair<std::string, std::string>> seenSub;
  std::set<std::string> seenInc;
  for (const auto& s : subsets) {
    for (const auto& ineq : inequalities) {
      // Subset(A,B) + m·#B ≤ n·#A with n ≤ m pinches #B ≤ #A, so A = B.
      if (ineq.a == s.b && ineq.b == s.a && ineq.n <= ineq.m &&
          seenSub.insert({s.b, s.a}).second) {
        CardinalityFact f;
        f.kind = FactKind::FiniteSubsumption;
        f.a = s.b;
        f.b = s.a;
        f.rule = "R5";
        f.derivation = merge_derivations(s.derivation, ineq.derivation);
        consequences.push_back(std::move(f));
      }
    }
  }
  for (const auto& ineq : inequalities) {
    if (ineq.a == ineq.b && ineq.n < ineq.m && seenInc.insert(ineq.a).second) {
      CardinalityFact f;
      f.kind = FactKind::FiniteInconsistent;
      f.a = ineq.a;
      f.rule = "R6";
      f.derivation = ineq.derivation;
      consequences.push_back(std::move(f));
    }
  }

  // ── Deterministic output ──────────────────────────────────────────────
  std::vector<CardinalityFact> facts;
  facts.reserve(inequalities.size() + subsets.size() + consequences.size());
  facts.insert(facts.end(), inequalities.begin(), inequalities.end());
  facts.insert(facts.end(), subsets.begin(), subsets.end());
  facts.insert(facts.end(), consequences.begin(), consequences.end());
  std::sort(facts.begin(), facts.end());
  return facts;
}

}  // namespace aluni
