#pragma once

// Provenance-tracked fact base over (model, scheduler) pairs and the fixpoint
// closure that turns Dominates/Separates primitives into the derived
// relations (>=, >, equivalent, orthogonal). Only the two primitives are ever
// stored; everything else is derived, with a replayable chain per statement.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcmsim/engine.hpp"
#include "lcmsim/schedule.hpp"

namespace lcmsim {

struct ModelSched {
  Model model = Model::Oblot;
  SchedulerKind sched = SchedulerKind::Fsync;

  friend bool operator==(const ModelSched& a, const ModelSched& b) {
    return a.model == b.model && a.sched == b.sched;
  }
  friend bool operator<(const ModelSched& a, const ModelSched& b) {
    if (a.model != b.model) return static_cast<int>(a.model) < static_cast<int>(b.model);
    return static_cast<int>(a.sched) < static_cast<int>(b.sched);
  }
};

inline std::string to_string(const ModelSched& ms) {
  const char* s = ms.sched == SchedulerKind::Fsync ? "F"
                  : ms.sched == SchedulerKind::Ssync ? "S"
                                                     : "A";
  return model_name(ms.model) + "^" + s;
}

inline ModelSched model_sched_from_string(const std::string& text) {
  const auto caret = text.find('^');
  if (caret == std::string::npos || caret + 2 != text.size())
    throw std::invalid_argument("expected MODEL^X notation, got '" + text + "'");
  ModelSched ms;
  ms.model = model_from_name(text.substr(0, caret));
  switch (text[caret + 1]) {
    case 'F': ms.sched = SchedulerKind::Fsync; break;
    case 'S': ms.sched = SchedulerKind::Ssync; break;
    case 'A': ms.sched = SchedulerKind::Async; break;
    default: throw std::invalid_argument("unknown scheduler letter in '" + text + "'");
  }
  return ms;
}

inline const std::array<ModelSched, 12>& model_sched_universe() {
  static const std::array<ModelSched, 12> all = [] {
    std::array<ModelSched, 12> out{};
    std::size_t i = 0;
    for (Model m : {Model::Oblot, Model::Fsta, Model::Fcom, Model::Lumi})
      for (SchedulerKind s : {SchedulerKind::Fsync, SchedulerKind::Ssync, SchedulerKind::Async})
        out[i++] = ModelSched{m, s};
    return out;
  }();
  return all;
}

struct Fact {
  enum class Kind { Dominates, Separates };
  enum class Origin { Axiom, Imported, Contribution };

  Kind kind = Kind::Dominates;
  ModelSched x;
  ModelSched y;
  std::string problem;     // Separates only: the witnessing task
  std::string provenance;  // never empty
  Origin origin = Origin::Axiom;
};

/// The axioms (scheduler and sub-model containments), the imported results
/// from the literature, and the separations this workbench demonstrates
/// itself. Every fact carries its provenance.
inline std::vector<Fact> base_facts() {
  using K = Fact::Kind;
  using O = Fact::Origin;
  std::vector<Fact> facts;

  auto ms = [](const char* s) { return model_sched_from_string(s); };
  auto dom = [&](const char* x, const char* y, std::string prov, O origin) {
    facts.push_back({K::Dominates, ms(x), ms(y), "", std::move(prov), origin});
  };
  auto sep = [&](const char* x, const char* y, std::string problem, std::string prov, O origin) {
    facts.push_back({K::Separates, ms(x), ms(y), std::move(problem), std::move(prov), origin});
  };

  // Scheduler chain: anything a weaker scheduler allows, a stronger one allows.
  const char* sched_axiom = "definitional: the asynchronous adversary subsumes the semi-synchronous one, which subsumes the fully synchronous one";
  for (const char* m : {"OBLOT", "FSTA", "FCOM", "LUMI"}) {
    const std::string name(m);
    dom((name + "^F").c_str(), (name + "^S").c_str(), sched_axiom, O::Axiom);
    dom((name + "^S").c_str(), (name + "^A").c_str(), sched_axiom, O::Axiom);
  }
  // Sub-model chain under every scheduler.
  const char* model_axiom = "definitional: a model can ignore the capabilities its sub-model lacks";
  for (const char* s : {"F", "S", "A"}) {
    const std::string suffix = std::string("^") + s;
    dom(("LUMI" + suffix).c_str(), ("FSTA" + suffix).c_str(), model_axiom, O::Axiom);
    dom(("LUMI" + suffix).c_str(), ("FCOM" + suffix).c_str(), model_axiom, O::Axiom);
    dom(("FSTA" + suffix).c_str(), ("OBLOT" + suffix).c_str(), model_axiom, O::Axiom);
    dom(("FCOM" + suffix).c_str(), ("OBLOT" + suffix).c_str(), model_axiom, O::Axiom);
  }

  // Imported equivalence halves (the other halves are axioms).
  const char* fsw = "Flocchini, Santoro, Wada (OPODIS 2019)";
  const char* dfpsy = "Das, Flocchini, Prencipe, Santoro, Yamashita (TCS 2016)";
  dom("LUMI^A", "LUMI^S", std::string(dfpsy) + ": full lights lose no power under asynchrony", O::Imported);
  dom("FCOM^F", "LUMI^F", std::string(fsw) + ": external lights match full lights under full synchrony", O::Imported);

  // Imported separations.
  sep("OBLOT^F", "FSTA^S", "SRO", std::string(fsw) + ": shrinking rotation", O::Imported);
  sep("OBLOT^F", "FCOM^S", "SRO", std::string(fsw) + ": shrinking rotation", O::Imported);
  sep("FSTA^S", "FCOM^S", "TAR(d)", std::string(fsw) + ": triangle rotation", O::Imported);
  sep("FSTA^F", "LUMI^S", "CGE", std::string(fsw) + ": center-of-gravity expansion", O::Imported);
  sep("FCOM^S", "FSTA^F", "-IL", std::string(fsw), O::Imported);
  sep("OBLOT^F", "OBLOT^S", "cited:SY99", "Suzuki, Yamashita (SIAM J. Comput. 1999)", O::Imported);
  sep("LUMI^A", "OBLOT^A", "cited:DFPSY16", dfpsy, O::Imported);
  sep("FSTA^F", "OBLOT^F", "cited:FSW19-f1", fsw, O::Imported);
  sep("FCOM^F", "OBLOT^F", "cited:FSW19-f2", fsw, O::Imported);
  sep("FCOM^F", "FSTA^S", "cited:FSW19-fs1", fsw, O::Imported);
  sep("FSTA^F", "FSTA^S", "cited:FSW19-fs2", fsw, O::Imported);
  sep("FCOM^F", "FCOM^S", "cited:FSW19-fs3", fsw, O::Imported);
  sep("LUMI^S", "FSTA^S", "cited:FSW19-s1", fsw, O::Imported);
  sep("LUMI^S", "FCOM^S", "cited:FSW19-s2", fsw, O::Imported);
  sep("LUMI^F", "LUMI^S", "cited:FSW19-fs4", fsw, O::Imported);

  // Separations demonstrated by this workbench.
  sep("FSTA^A", "OBLOT^F", "OC",
      "demonstrated here: the oscillator passes under every fair asynchronous schedule while the "
      "oblivious indistinguishability witness convicts every lightless program",
      O::Contribution);
  sep("FCOM^A", "FSTA^F", "-IL",
      "demonstrated here: the line former passes under every fair asynchronous schedule; "
      "unsolvability with an internal light is imported from Flocchini, Santoro, Wada (OPODIS 2019)",
      O::Contribution);
  sep("FSTA^A", "FCOM^S", "IOP",
      "demonstrated here: the distance doubler passes under every fair asynchronous schedule while "
      "the repeat-activation search makes every external-light program overshoot or stall",
      O::Contribution);

  return facts;
}

inline std::vector<Fact> without_contributions(const std::vector<Fact>& facts) {
  std::vector<Fact> out;
  for (const auto& f : facts)
    if (f.origin != Fact::Origin::Contribution) out.push_back(f);
  return out;
}

// A derivation step: how one closed statement follows from earlier ones.
struct Derivation {
  std::string rule;                   // "base", "reflexivity", "transitivity", "lift-left", "lift-right"
  std::vector<std::string> premises;  // keys of the statements used
  std::string provenance;             // base facts only
};

/// Fixpoint closure of a fact list under dominance transitivity and the two
/// separation lifting rules. Detects contradictions (a separation against a
/// dominating pair) and keeps a replayable derivation per statement.
class Closure {
 public:
  static Closure close(const std::vector<Fact>& facts) {
    Closure c;
    for (const auto& f : facts) {
      if (f.provenance.empty()) throw std::invalid_argument("fact without provenance");
      if (f.kind == Fact::Kind::Dominates) {
        c.add_dom(f.x, f.y, {"base", {}, f.provenance});
      } else {
        if (f.x == f.y) throw std::invalid_argument("a task cannot separate a pair from itself");
        c.add_sep(f.x, f.y, f.problem, {"base", {}, f.provenance});
      }
    }
    for (const auto& ms : model_sched_universe())
      c.add_dom(ms, ms, {"reflexivity", {}, "definitional"});

    bool changed = true;
    while (changed) {
      changed = false;
      // Dominance transitivity.
      for (const auto& x : model_sched_universe())
        for (const auto& y : model_sched_universe()) {
          if (!c.dominates(x, y)) continue;
          for (const auto& z : model_sched_universe()) {
            if (!c.dominates(y, z) || c.dominates(x, z)) continue;
            c.add_dom(x, z, {"transitivity", {dom_key(x, y), dom_key(y, z)}, ""});
            changed = true;
          }
        }
      // Separation lifting through dominance on either side.
      const auto seps = c.separations_;  // iterate a stable copy
      for (const auto& [key, deriv] : seps) {
        const auto& [x, y, problem] = key;
        for (const auto& s : model_sched_universe()) {
          if (c.dominates(s, x) && !c.separates(s, y, problem)) {
            c.add_sep(s, y, problem, {"lift-left", {dom_key(s, x), sep_key(x, y, problem)}, ""});
            changed = true;
          }
          if (c.dominates(y, s) && !c.separates(x, s, problem)) {
            if (x == s) throw std::logic_error("contradiction: separation against equivalence for " + to_string(x));
            c.add_sep(x, s, problem, {"lift-right", {dom_key(y, s), sep_key(x, y, problem)}, ""});
            changed = true;
          }
        }
      }
    }

    // Consistency: a task solvable in x but not in y while y dominates x is
    // a broken fact base.
    for (const auto& [key, deriv] : c.separations_) {
      const auto& [x, y, problem] = key;
      if (c.dominates(y, x))
        throw std::logic_error("contradictory fact base: " + to_string(y) + " >= " + to_string(x) +
                               " but task " + problem + " separates " + to_string(x) + " from " +
                               to_string(y));
    }
    return c;
  }

  bool dominates(const ModelSched& x, const ModelSched& y) const {
    return dominances_.count(dom_key(x, y)) > 0;
  }
  bool separates(const ModelSched& x, const ModelSched& y) const {
    for (const auto& [key, deriv] : separations_)
      if (std::get<0>(key) == x && std::get<1>(key) == y) return true;
    return false;
  }
  bool separates(const ModelSched& x, const ModelSched& y, const std::string& problem) const {
    return separations_.count(std::make_tuple(x, y, problem)) > 0;
  }

  /// Witnessing problems for a separation, sorted for determinism.
  std::vector<std::string> separation_problems(const ModelSched& x, const ModelSched& y) const {
    std::vector<std::string> out;
    for (const auto& [key, deriv] : separations_)
      if (std::get<0>(key) == x && std::get<1>(key) == y) out.push_back(std::get<2>(key));
    return out;
  }

  /// Renders the derivation of a closed statement, premises first.
  std::vector<std::string> explain_dominance(const ModelSched& x, const ModelSched& y) const {
    std::vector<std::string> lines;
    std::set<std::string> seen;
    expand(dom_key(x, y), lines, seen);
    return lines;
  }
  std::vector<std::string> explain_separation(const ModelSched& x, const ModelSched& y,
                                              const std::string& problem) const {
    std::vector<std::string> lines;
    std::set<std::string> seen;
    expand(sep_key(x, y, problem), lines, seen);
    return lines;
  }

  std::size_t dominance_count() const { return dominances_.size(); }
  std::size_t separation_count() const { return separations_.size(); }

 private:
  static std::string dom_key(const ModelSched& x, const ModelSched& y) {
    return to_string(x) + " >= " + to_string(y);
  }
  static std::string sep_key(const ModelSched& x, const ModelSched& y, const std::string& p) {
    return to_string(x) + " | " + to_string(y) + " via " + p;
  }

  void add_dom(const ModelSched& x, const ModelSched& y, Derivation d) {
    dominances_.emplace(dom_key(x, y), std::move(d));
  }
  void add_sep(const ModelSched& x, const ModelSched& y, const std::string& p, Derivation d) {
    separations_.emplace(std::make_tuple(x, y, p), std::move(d));
  }

  const Derivation* find(const std::string& key) const {
    if (auto it = dominances_.find(key); it != dominances_.end()) return &it->second;
    for (const auto& [k, d] : separations_)
      if (sep_key(std::get<0>(k), std::get<1>(k), std::get<2>(k)) == key) return &d;
    return nullptr;
  }

  void expand(const std::string& key, std::vector<std::string>& lines,
              std::set<std::string>& seen) const {
    if (!seen.insert(key).second) return;
    const Derivation* d = find(key);
    if (!d) {
      lines.push_back(key + "  [not derived]");
      return;
    }
    for (const auto& p : d->premises) expand(p, lines, seen);
    lines.push_back(key + "  [" + d->rule + (d->provenance.empty() ? "" : ": " + d->provenance) +
                    "]");
  }

  std::map<std::string, Derivation> dominances_;
  std::map<std::tuple<ModelSched, ModelSched, std::string>, Derivation> separations_;
};

enum class Relation { AtLeast, MorePowerful, Equivalent, Orthogonal, Unknown };

inline std::string relation_name(Relation r) {
  switch (r) {
    case Relation::AtLeast: return ">=";
    case Relation::MorePowerful: return ">";
    case Relation::Equivalent: return "==";
    case Relation::Orthogonal: return "_|_";
    case Relation::Unknown: return "unknown";
  }
  throw std::logic_error("bad relation");
}

struct DerivedRelation {
  Relation relation = Relation::Unknown;
  std::vector<std::string> chain;
};

/// Classifies (x, y) from the closed primitives:
///   equivalent  iff dominance both ways,
///   >           iff dominance plus a separating task,
///   orthogonal  iff separating tasks both ways,
///   >=          iff dominance only,
///   unknown     otherwise. The chain replays every premise used.
inline DerivedRelation derive(const Closure& closure, const ModelSched& x, const ModelSched& y) {
  DerivedRelation out;
  const bool dom_xy = closure.dominates(x, y);
  const bool dom_yx = closure.dominates(y, x);
  const bool sep_xy = closure.separates(x, y);
  const bool sep_yx = closure.separates(y, x);

  auto sep_chain = [&](const ModelSched& a, const ModelSched& b) {
    const auto problems = closure.separation_problems(a, b);
    return closure.explain_separation(a, b, problems.front());
  };
  auto append = [&](std::vector<std::string> lines) {
    out.chain.insert(out.chain.end(), lines.begin(), lines.end());
  };

  if (dom_xy && dom_yx) {
    out.relation = Relation::Equivalent;
    append(closure.explain_dominance(x, y));
    append(closure.explain_dominance(y, x));
  } else if (dom_xy && sep_xy) {
    out.relation = Relation::MorePowerful;
    append(closure.explain_dominance(x, y));
    append(sep_chain(x, y));
  } else if (sep_xy && sep_yx) {
    out.relation = Relation::Orthogonal;
    append(sep_chain(x, y));
    append(sep_chain(y, x));
  } else if (dom_xy) {
    out.relation = Relation::AtLeast;
    append(closure.explain_dominance(x, y));
  } else {
    out.relation = Relation::Unknown;
    if (sep_xy) append(sep_chain(x, y));
    if (sep_yx) append(sep_chain(y, x));
  }
  return out;
}

// ---------------------------------------------------------------------------
// The claim catalog: every relation the fact base is expected to settle, and
// the pairs that must remain unresolved.

struct Claim {
  enum class Expect { MorePowerful, Orthogonal, Unresolved };
  std::string id;
  ModelSched x;
  ModelSched y;
  Expect expect = Expect::MorePowerful;
};

inline std::vector<Claim> claim_catalog() {
  using E = Claim::Expect;
  auto ms = [](const char* s) { return model_sched_from_string(s); };
  return {
      {"D1", ms("FSTA^F"), ms("OBLOT^A"), E::MorePowerful},
      {"D2", ms("FCOM^F"), ms("OBLOT^A"), E::MorePowerful},
      {"D3", ms("LUMI^F"), ms("OBLOT^A"), E::MorePowerful},
      {"D4", ms("LUMI^S"), ms("OBLOT^A"), E::MorePowerful},
      {"D5", ms("FCOM^F"), ms("FSTA^A"), E::MorePowerful},
      {"D6", ms("FSTA^F"), ms("FSTA^A"), E::MorePowerful},
      {"D7", ms("LUMI^A"), ms("FSTA^A"), E::MorePowerful},
      {"D8", ms("LUMI^S"), ms("FSTA^A"), E::MorePowerful},
      {"D9", ms("LUMI^F"), ms("FSTA^A"), E::MorePowerful},
      {"D10", ms("FCOM^F"), ms("FCOM^A"), E::MorePowerful},
      {"D11", ms("LUMI^A"), ms("FCOM^A"), E::MorePowerful},
      {"D12", ms("LUMI^S"), ms("FCOM^A"), E::MorePowerful},
      {"D13", ms("LUMI^F"), ms("FCOM^A"), E::MorePowerful},
      {"D14", ms("FCOM^F"), ms("LUMI^A"), E::MorePowerful},
      {"D15", ms("LUMI^F"), ms("LUMI^A"), E::MorePowerful},
      {"D16", ms("LUMI^A"), ms("FSTA^S"), E::MorePowerful},
      {"D17", ms("LUMI^A"), ms("FCOM^S"), E::MorePowerful},
      {"T1", ms("OBLOT^F"), ms("FSTA^A"), E::Orthogonal},
      {"T2", ms("FSTA^A"), ms("OBLOT^A"), E::MorePowerful},
      {"T3", ms("FCOM^A"), ms("FSTA^F"), E::Orthogonal},
      {"T4", ms("FCOM^A"), ms("FSTA^S"), E::Orthogonal},
      {"T5", ms("FCOM^A"), ms("OBLOT^F"), E::Orthogonal},
      {"T6", ms("FCOM^S"), ms("FSTA^A"), E::Orthogonal},
      {"T7", ms("FCOM^A"), ms("FSTA^A"), E::Orthogonal},
      {"U1", ms("OBLOT^S"), ms("OBLOT^A"), E::Unresolved},
      {"U2", ms("FSTA^S"), ms("FSTA^A"), E::Unresolved},
      {"U3", ms("FSTA^A"), ms("OBLOT^S"), E::Unresolved},
      {"U4", ms("FCOM^S"), ms("FCOM^A"), E::Unresolved},
      {"U5", ms("FCOM^A"), ms("OBLOT^S"), E::Unresolved},
  };
}

struct ClaimResult {
  Claim claim;
  bool pass = false;
  std::string actual;
  std::vector<std::string> chain;
};

inline ClaimResult evaluate_claim(const Closure& closure, const Claim& claim) {
  ClaimResult result;
  result.claim = claim;
  const DerivedRelation forward = derive(closure, claim.x, claim.y);
  const DerivedRelation backward = derive(closure, claim.y, claim.x);

  switch (claim.expect) {
    case Claim::Expect::MorePowerful:
      result.pass = forward.relation == Relation::MorePowerful;
      result.actual = relation_name(forward.relation);
      result.chain = forward.chain;
      break;
    case Claim::Expect::Orthogonal:
      result.pass = forward.relation == Relation::Orthogonal;
      result.actual = relation_name(forward.relation);
      result.chain = forward.chain;
      break;
    case Claim::Expect::Unresolved: {
      auto open = [](Relation r) { return r == Relation::AtLeast || r == Relation::Unknown; };
      result.pass = open(forward.relation) && open(backward.relation);
      result.actual = relation_name(forward.relation) + " / " + relation_name(backward.relation) +
                      " (reverse)";
      result.chain = forward.chain;
      break;
    }
  }
  return result;
}

/// Evaluates the whole catalog against a closure of the given facts.
inline std::vector<ClaimResult> verify_claims(const std::vector<Fact>& facts) {
  const Closure closure = Closure::close(facts);
  std::vector<ClaimResult> out;
  for (const auto& claim : claim_catalog()) out.push_back(evaluate_claim(closure, claim));
  return out;
}

inline std::vector<ClaimResult> verify_claims() { return verify_claims(base_facts()); }

}  // namespace lcmsim
