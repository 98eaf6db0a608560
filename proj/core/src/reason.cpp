#include "aluni/reason.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "aluni/diagnostics.hpp"

namespace aluni {

// ── Budget ──────────────────────────────────────────────────────────────────

void SearchBudget::validate() const {
  if (minSize < 1) throw std::invalid_argument("minSize must be at least 1");
  if (maxSize < minSize)
    throw std::invalid_argument("maxSize must be at least minSize");
  if (maxSize > 64)
    throw std::invalid_argument("maxSize must be at most 64");
  if (!(timeLimit > 0.0))
    throw std::invalid_argument("timeLimit must be positive");
}

// ── Verdict JSON ────────────────────────────────────────────────────────────

std::string to_json(const ReasoningVerdict& v, bool pretty) {
  nlohmann::json j;
  switch (v.outcome) {
    case Outcome::WitnessFound:
      j["outcome"] = "witness-found";
      break;
    case Outcome::NoModelUpTo:
      j["outcome"] = "no-model-up-to";
      break;
    case Outcome::TimedOut:
      j["outcome"] = "timed-out";
      break;
  }
  j["bound"] = v.bound;
  j["witness"] = nullptr;
  if (v.witness)
    j["witness"] = nlohmann::json::parse(to_json(*v.witness));
  return pretty ? j.dump(2) : j.dump();
}

// ── Searcher ────────────────────────────────────────────────────────────────
//
//  Satisfiability over a candidate grid: three-valued membership variables
//  c[d][A] per individual/concept and r[P][d][e] per role/pair, explored by
//  backtracking in a fixed lexicographic order (all concept variables
//  ascending, then all role variables; False before True), with implied
//  literals propagated to fixpoint after every decision.  Every forced
//  literal is a logical consequence of the decisions, so no candidate model
//  is pruned; total assignments are finally verified with the exact
//  evaluator before being accepted.

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::int8_t kFalse = 0;
constexpr std::int8_t kTrue = 1;
constexpr std::int8_t kUndef = 2;

/// Three-valued truth with Kleene semantics: a definite value means every
/// completion of the current partial assignment agrees on it.
enum class Tri : std::int8_t { False, True, Unknown };

void collect_symbols(const ConceptExpr& c, std::vector<std::string>& atoms,
                     std::vector<std::string>& roles) {
  switch (c.kind()) {
    case ConceptKind::Atomic:
    case ConceptKind::NegAtomic:
      atoms.push_back(c.atom_name());
      return;
    case ConceptKind::Forall:
      roles.push_back(c.role().name);
      break;
    case ConceptKind::AtLeast:
    case ConceptKind::AtMost:
      roles.push_back(c.role().name);
      return;
    default:
      break;
  }
  for (const auto& part : c.parts()) collect_symbols(*part, atoms, roles);
}

class Searcher {
public:
  Searcher(const KnowledgeBase& kb, ConceptPtr goalPos, ConceptPtr goalNeg,
           Clock::time_point deadline)
      : kb_(kb),
        goalPos_(std::move(goalPos)),
        goalNeg_(std::move(goalNeg)),
        deadline_(deadline) {
    // Deterministic symbol numbering over the (sorted) signature.
    conceptNames_.assign(kb.concepts.begin(), kb.concepts.end());
    std::sort(conceptNames_.begin(), conceptNames_.end());
    roleNames_.assign(kb.roles.begin(), kb.roles.end());
    std::sort(roleNames_.begin(), roleNames_.end());
    for (std::size_t i = 0; i < conceptNames_.size(); ++i)
      conceptIndex_[conceptNames_[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < roleNames_.size(); ++i)
      roleIndex_[roleNames_[i]] = static_cast<int>(i);
  }

  /// Complete search at domain size n.  Returns the lexicographically
  /// first witness, or nullopt; sets `timedOut` if the deadline struck.
  std::optional<Interpretation> solve_size(int n, bool& timedOut) {
    n_ = n;
    numC_ = static_cast<int>(conceptNames_.size());
    numR_ = static_cast<int>(roleNames_.size());
    numCV_ = n_ * numC_;
    const int numVars = numCV_ + numR_ * n_ * n_;
    val_.assign(static_cast<std::size_t>(numVars), kUndef);
    trail_.clear();
    timedOut = false;

    if (!propagate()) return std::nullopt;  // already contradictory

    struct Decision {
      int var;
      std::int8_t value;      // value currently tried
      std::size_t trailMark;  // trail length before this decision
    };
    std::vector<Decision> decisions;

    for (;;) {
      if (++nodes_ % 1024 == 0 && Clock::now() > deadline_) {
        timedOut = true;
        return std::nullopt;
      }

      int var = first_unassigned();
      bool conflict = false;
      if (var < 0) {
        // Total assignment: accept only if the exact semantics agrees.
        Interpretation candidate = extract();
        if (verify(candidate)) return candidate;
        conflict = true;
      } else {
        decisions.push_back({var, kFalse, trail_.size()});
        conflict = !(assign(var, kFalse) && propagate());
      }

      while (conflict) {
        if (decisions.empty()) return std::nullopt;  // size exhausted
        Decision& d = decisions.back();
        undo_to(d.trailMark);
        if (d.value == kFalse) {
          d.value = kTrue;
          conflict = !(assign(d.var, kTrue) && propagate());
        } else {
          decisions.pop_back();
        }
      }
    }
  }

private:
  // ── Variable layout ───────────────────────────────────────────────────

  int cvar(int d, int a) const { return d * numC_ + a; }
  int rvar(int p, int d, int e) const {
    return numCV_ + (p * n_ + d) * n_ + e;
  }

  /// Variable of the (d, e) edge of a possibly inverted role.
  int edge_var(const RoleExpr& r, int d, int e) const {
    int p = roleIndex_.at(r.name);
    return r.inverted ? rvar(p, e, d) : rvar(p, d, e);
  }

  int first_unassigned() const {
    for (std::size_t v = 0; v < val_.size(); ++v)
      if (val_[v] == kUndef) return static_cast<int>(v);
    return -1;
  }

  // ── Assignment and trail ──────────────────────────────────────────────

  bool assign(int var, std::int8_t value) {
    std::int8_t& slot = val_[static_cast<std::size_t>(var)];
    if (slot == value) return true;
    if (slot != kUndef) return false;  // conflict
    slot = value;
    trail_.push_back(var);
    return true;
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      val_[static_cast<std::size_t>(trail_.back())] = kUndef;
      trail_.pop_back();
    }
  }

  // ── Three-valued evaluation ───────────────────────────────────────────

  Tri eval3(int d, const ConceptExpr& c) const {
    switch (c.kind()) {
      case ConceptKind::Top:
        return Tri::True;
      case ConceptKind::Bottom:
        return Tri::False;
      case ConceptKind::Atomic: {
        std::int8_t v = val_[cvar(d, conceptIndex_.at(c.atom_name()))];
        return v == kUndef ? Tri::Unknown
                           : (v == kTrue ? Tri::True : Tri::False);
      }
      case ConceptKind::NegAtomic: {
        std::int8_t v = val_[cvar(d, conceptIndex_.at(c.atom_name()))];
        return v == kUndef ? Tri::Unknown
                           : (v == kTrue ? Tri::False : Tri::True);
      }
      case ConceptKind::And: {
        bool unknown = false;
        for (const auto& part : c.parts()) {
          Tri t = eval3(d, *part);
          if (t == Tri::False) return Tri::False;
          if (t == Tri::Unknown) unknown = true;
        }
        return unknown ? Tri::Unknown : Tri::True;
      }
      case ConceptKind::Or: {
        bool unknown = false;
        for (const auto& part : c.parts()) {
          Tri t = eval3(d, *part);
          if (t == Tri::True) return Tri::True;
          if (t == Tri::Unknown) unknown = true;
        }
        return unknown ? Tri::Unknown : Tri::False;
      }
      case ConceptKind::Forall: {
        // False if some definite successor definitely violates the body;
        // True if every potential successor is ruled out or definitely
        // satisfies the body.
        bool allSafe = true;
        for (int e = 0; e < n_; ++e) {
          std::int8_t edge = val_[edge_var(c.role(), d, e)];
          if (edge == kFalse) continue;
          Tri body = eval3(e, *c.body());
          if (edge == kTrue && body == Tri::False) return Tri::False;
          if (body != Tri::True) allSafe = false;
        }
        return allSafe ? Tri::True : Tri::Unknown;
      }
      case ConceptKind::AtLeast:
      case ConceptKind::AtMost: {
        int definite = 0, open = 0;
        for (int e = 0; e < n_; ++e) {
          std::int8_t edge = val_[edge_var(c.role(), d, e)];
          if (edge == kTrue) ++definite;
          else if (edge == kUndef) ++open;
        }
        unsigned lo = static_cast<unsigned>(definite);
        unsigned hi = static_cast<unsigned>(definite + open);
        if (c.kind() == ConceptKind::AtLeast) {
          if (lo >= c.bound()) return Tri::True;
          if (hi < c.bound()) return Tri::False;
        } else {
          if (hi <= c.bound()) return Tri::True;
          if (lo > c.bound()) return Tri::False;
        }
        return Tri::Unknown;
      }
    }
    return Tri::Unknown;  // unreachable
  }

  // ── Implied-literal extraction ────────────────────────────────────────
  //
  //  require(d, C): d must satisfy C in every completion — forces only
  //  literals implied by that constraint.  forbid(d, C): d must violate C.
  //  Both return false on definite conflict.

  bool require(int d, const ConceptExpr& c) {
    switch (c.kind()) {
      case ConceptKind::Top:
        return true;
      case ConceptKind::Bottom:
        return false;
      case ConceptKind::Atomic:
        return assign(cvar(d, conceptIndex_.at(c.atom_name())), kTrue);
      case ConceptKind::NegAtomic:
        return assign(cvar(d, conceptIndex_.at(c.atom_name())), kFalse);
      case ConceptKind::And: {
        for (const auto& part : c.parts())
          if (!require(d, *part)) return false;
        return true;
      }
      case ConceptKind::Or: {
        // Force the last live disjunct once all others are definitely out.
        const ConceptExpr* live = nullptr;
        for (const auto& part : c.parts()) {
          Tri t = eval3(d, *part);
          if (t == Tri::True) return true;
          if (t == Tri::Unknown) {
            if (live != nullptr) return true;  // ≥ 2 open, nothing implied
            live = part.get();
          }
        }
        if (live == nullptr) return false;  // every disjunct ruled out
        return require(d, *live);
      }
      case ConceptKind::Forall: {
        for (int e = 0; e < n_; ++e) {
          std::int8_t edge = val_[edge_var(c.role(), d, e)];
          if (edge == kFalse) continue;
          Tri body = eval3(e, *c.body());
          if (edge == kTrue) {
            if (body == Tri::False) return false;
            if (!require(e, *c.body())) return false;
          } else if (body == Tri::False) {
            // e can never satisfy the body, so the edge cannot exist.
            if (!assign(edge_var(c.role(), d, e), kFalse)) return false;
          }
        }
        return true;
      }
      case ConceptKind::AtLeast:
        return require_at_least(d, c.role(), c.bound());
      case ConceptKind::AtMost:
        return require_at_most(d, c.role(), c.bound());
    }
    return true;  // unreachable
  }

  bool forbid(int d, const ConceptExpr& c) {
    switch (c.kind()) {
      case ConceptKind::Top:
        return false;
      case ConceptKind::Bottom:
        return true;
      case ConceptKind::Atomic:
        return assign(cvar(d, conceptIndex_.at(c.atom_name())), kFalse);
      case ConceptKind::NegAtomic:
        return assign(cvar(d, conceptIndex_.at(c.atom_name())), kTrue);
      case ConceptKind::And: {
        // Some conjunct must fail; only forcible once all others hold.
        const ConceptExpr* live = nullptr;
        for (const auto& part : c.parts()) {
          Tri t = eval3(d, *part);
          if (t == Tri::False) return true;
          if (t == Tri::Unknown) {
            if (live != nullptr) return true;
            live = part.get();
          }
        }
        if (live == nullptr) return false;  // all conjuncts definitely hold
        return forbid(d, *live);
      }
      case ConceptKind::Or: {
        for (const auto& part : c.parts())
          if (!forbid(d, *part)) return false;
        return true;
      }
      case ConceptKind::Forall:
        // Needs a successor violating the body; not directly forcible.
        return eval3(d, c) != Tri::True;
      case ConceptKind::AtLeast:
        // ¬(≥ n) ⇔ ≤ n−1; bounds are ≥ 1 after normalization.
        return require_at_most(d, c.role(), c.bound() - 1);
      case ConceptKind::AtMost:
        return require_at_least(d, c.role(), c.bound() + 1);
    }
    return true;  // unreachable
  }

  bool require_at_least(int d, const RoleExpr& r, unsigned bound) {
    int definite = 0, open = 0;
    for (int e = 0; e < n_; ++e) {
      std::int8_t edge = val_[edge_var(r, d, e)];
      if (edge == kTrue) ++definite;
      else if (edge == kUndef) ++open;
    }
    unsigned hi = static_cast<unsigned>(definite + open);
    if (hi < bound) return false;
    if (static_cast<unsigned>(definite) >= bound) return true;
    if (hi == bound) {
      // Every open edge is needed.
      for (int e = 0; e < n_; ++e) {
        int var = edge_var(r, d, e);
        if (val_[var] == kUndef && !assign(var, kTrue)) return false;
      }
    }
    return true;
  }

  bool require_at_most(int d, const RoleExpr& r, unsigned bound) {
    int definite = 0;
    for (int e = 0; e < n_; ++e)
      if (val_[edge_var(r, d, e)] == kTrue) ++definite;
    if (static_cast<unsigned>(definite) > bound) return false;
    if (static_cast<unsigned>(definite) == bound) {
      // The budget is spent; no further edge may appear.
      for (int e = 0; e < n_; ++e) {
        int var = edge_var(r, d, e);
        if (val_[var] == kUndef && !assign(var, kFalse)) return false;
      }
    }
    return true;
  }

  // ── Propagation ───────────────────────────────────────────────────────

  bool propagate() {
    for (;;) {
      std::size_t mark = trail_.size();

      // Goal constraints (symmetry breaking: individual 0 realizes them).
      if (!require(0, *goalPos_)) return false;
      if (goalNeg_ && !forbid(0, *goalNeg_)) return false;

      // Inclusion assertions, per individual.
      for (const auto& assertion : kb_.assertions) {
        int a = conceptIndex_.at(assertion.lhs);
        for (int d = 0; d < n_; ++d) {
          std::int8_t member = val_[cvar(d, a)];
          if (member == kTrue) {
            if (!require(d, *assertion.rhs)) return false;
          } else if (member == kUndef &&
                     eval3(d, *assertion.rhs) == Tri::False) {
            // Contrapositive: d cannot join the lhs any more.
            if (!assign(cvar(d, a), kFalse)) return false;
          }
        }
      }

      if (trail_.size() == mark) return true;  // fixpoint
    }
  }

  // ── Finalization ──────────────────────────────────────────────────────

  Interpretation extract() const {
    Interpretation i;
    i.domain = n_;
    for (int a = 0; a < numC_; ++a) {
      auto& ext = i.concepts[conceptNames_[static_cast<std::size_t>(a)]];
      for (int d = 0; d < n_; ++d)
        if (val_[cvar(d, a)] == kTrue) ext.insert(d);
    }
    for (int p = 0; p < numR_; ++p) {
      auto& ext = i.roles[roleNames_[static_cast<std::size_t>(p)]];
      for (int d = 0; d < n_; ++d)
        for (int e = 0; e < n_; ++e)
          if (val_[rvar(p, d, e)] == kTrue) ext.insert({d, e});
    }
    return i;
  }

  /// Exact acceptance check, independent of the propagation machinery.
  bool verify(const Interpretation& i) const {
    if (!is_model(kb_, i).ok) return false;
    if (!evaluate_concept(*goalPos_, i).count(0)) return false;
    if (goalNeg_ && evaluate_concept(*goalNeg_, i).count(0)) return false;
    return true;
  }

  const KnowledgeBase& kb_;
  ConceptPtr goalPos_;
  ConceptPtr goalNeg_;  // may be null
  Clock::time_point deadline_;

  std::vector<std::string> conceptNames_;
  std::vector<std::string> roleNames_;
  std::map<std::string, int> conceptIndex_;
  std::map<std::string, int> roleIndex_;

  int n_ = 0, numC_ = 0, numR_ = 0, numCV_ = 0;
  std::vector<std::int8_t> val_;
  std::vector<int> trail_;
  std::uint64_t nodes_ = 0;
};

void check_goal_symbols(const KnowledgeBase& k, const ConceptExpr& goal) {
  std::vector<std::string> atoms, roles;
  collect_symbols(goal, atoms, roles);
  for (const auto& a : atoms)
    if (!k.has_concept(a))
      throw SignatureError("goal mentions unknown concept '" + a + "'");
  for (const auto& p : roles)
    if (!k.has_role(p))
      throw SignatureError("goal mentions unknown role '" + p + "'");
}

ReasoningVerdict search(const KnowledgeBase& k, const ConceptPtr& goalPos,
                        const ConceptPtr& goalNeg, const SearchBudget& budget) {
  budget.validate();
  check_goal_symbols(k, *goalPos);
  if (goalNeg) check_goal_symbols(k, *goalNeg);

  auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(
                                         budget.timeLimit));
  Searcher searcher(k, goalPos, goalNeg, deadline);

  int lastCompleted = 0;
  for (int n = budget.minSize; n <= budget.maxSize; ++n) {
    bool timedOut = false;
    std::optional<Interpretation> witness = searcher.solve_size(n, timedOut);
    if (witness) {
      ReasoningVerdict v;
      v.outcome = Outcome::WitnessFound;
      v.bound = n;
      v.witness = std::move(witness);
      return v;
    }
    if (timedOut) {
      ReasoningVerdict v;
      v.outcome = Outcome::TimedOut;
      v.bound = lastCompleted;
      return v;
    }
    lastCompleted = n;
  }
  ReasoningVerdict v;
  v.outcome = Outcome::NoModelUpTo;
  v.bound = budget.maxSize;
  return v;
}

}  // namespace

// ── Public entry points ─────────────────────────────────────────────────────

ReasoningVerdict find_model(const KnowledgeBase& k, const ConceptPtr& goal,
                            const SearchBudget& budget) {
  return search(k, goal, nullptr, budget);
}

ReasoningVerdict subsumption_counterexample(const KnowledgeBase& k,
                                            const ConceptPtr& c1,
                                            const ConceptPtr& c2,
                                            const SearchBudget& budget) {
  return search(k, c1, c2, budget);
}

}  // namespace aluni
