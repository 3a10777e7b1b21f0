#pragma once

// Mechanized negative results.
//
// 1. Oblivious indistinguishability: in the four-robot oscillation problem
//    the two histories "reached the second formation from the first" and
//    "reached it from the third" present literally identical worlds, yet
//    demand non-similar successors. Any deterministic lightless program
//    therefore fails at least one history; the witness procedure finds which.
//
// 2. Bounded adversarial search against FCOM programs for the independent
//    oscillation problem, built around the two-round "activate only the same
//    terminal twice" strategy that makes a memoryless terminal overshoot.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lcmsim/algorithms.hpp"
#include "lcmsim/engine.hpp"
#include "lcmsim/problems.hpp"
#include "lcmsim/schedule.hpp"
#include "lcmsim/trace.hpp"

namespace lcmsim {

struct NondeterministicProgram : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The two histories share one world; only the obligations differ.
struct OcCasePair {
  WorldState after_advance;  // second formation reached from the first; next must be Third
  WorldState after_retreat;  // second formation reached from the third; next must be First
  Formation required_after_advance = Formation::Third;
  Formation required_after_retreat = Formation::First;
};

/// Builds the case pair and asserts, by direct construction, that every
/// robot's lightless snapshot is identical in the two cases under equal
/// frames.
inline OcCasePair oc_case_pair(const OCInstance& instance) {
  instance.validate();
  OcCasePair pair;
  pair.after_advance = make_world(instance.formation_points(Formation::Second));
  pair.after_retreat = make_world(instance.formation_points(Formation::Second));

  for (const auto& robot : pair.after_advance.robots) {
    for (const auto& m : detail::probe_multipliers()) {
      const Transform frame = Transform::frame_at(m, robot.current_position());
      const Snapshot a = take_snapshot(pair.after_advance, robot.id, Model::Oblot, frame);
      const Snapshot b = take_snapshot(pair.after_retreat, robot.id, Model::Oblot, frame);
      if (!(a == b))
        throw std::logic_error("case pair is broken: snapshots differ for robot " +
                               std::to_string(robot.id));
    }
  }
  return pair;
}

struct OcWitness {
  std::string program;
  WorldState start;                 // the shared second-formation world
  std::vector<WorldState> rounds;   // successive fully synchronous rounds
  Formation exit_formation = Formation::Second;  // first class other than Second, if any
  bool looped = false;              // deterministic repetition inside the second formation
  bool bound_exhausted = false;
  bool advance_case_violated = false;
  bool retreat_case_violated = false;
  std::string clause;
};

/// Runs fully synchronous rounds of a deterministic OBLOT program from the
/// shared world of the case pair. Equal views force equal successors, while
/// the two histories demand non-similar ones, so every program earns a
/// witness: the successor class convicts one history directly, and staying
/// inside the second formation convicts both (a deterministic repetition can
/// never leave it).
inline OcWitness oc_oblot_witness(const Program& program, const OCInstance& instance,
                                  int max_rounds = 16) {
  if (program.model() != Model::Oblot)
    throw std::invalid_argument("oc_oblot_witness requires an OBLOT program");
  const OcCasePair pair = oc_case_pair(instance);

  // Nondeterminism check: two evaluations of every robot's snapshot.
  for (const auto& robot : pair.after_advance.robots) {
    const Transform frame = Transform::frame_at(RotScale::identity(), robot.current_position());
    const Snapshot snap = take_snapshot(pair.after_advance, robot.id, Model::Oblot, frame);
    const ProgramOutput first = program.compute(snap);
    const ProgramOutput second = program.compute(snap);
    if (first.light != second.light || !(first.destination == second.destination))
      throw NondeterministicProgram("program " + program.name() +
                                    " gave two outputs for one snapshot");
  }

  std::vector<int> all_ids;
  for (const auto& r : pair.after_advance.robots) all_ids.push_back(r.id);

  // Equal snapshots must give equal one-round successors across the pair.
  {
    const WorldState s1 = apply_round(pair.after_advance, all_ids, program, Model::Oblot);
    const WorldState s2 = apply_round(pair.after_retreat, all_ids, program, Model::Oblot);
    if (!(s1 == s2))
      throw std::logic_error("equal snapshots produced different one-round successors");
  }

  OcWitness w;
  w.program = program.name();
  w.start = pair.after_advance;

  std::vector<WorldState> seen{pair.after_advance};
  WorldState world = pair.after_advance;
  for (int r = 0; r < max_rounds; ++r) {
    WorldState next;
    try {
      next = apply_round(world, all_ids, program, Model::Oblot);
      next.event_index = world.event_index + 1;
      check_no_collision(next);
    } catch (const CollisionError&) {
      w.rounds.push_back(next);  // the colliding world, as evidence
      w.exit_formation = Formation::Other;
      w.advance_case_violated = w.retreat_case_violated = true;
      w.clause = "the program collides robots, so no history can continue";
      return w;
    }
    w.rounds.push_back(next);
    const Formation f = classify_oc(next, instance);
    if (f == Formation::Other) {
      w.exit_formation = f;
      w.advance_case_violated = w.retreat_case_violated = true;
      w.clause = "an idle state matches no formation, violating both histories";
      return w;
    }
    if (f == Formation::First) {
      w.exit_formation = f;
      w.advance_case_violated = true;
      w.clause = "both histories reach the first formation, but the advance history requires the third";
      return w;
    }
    if (f == Formation::Third) {
      w.exit_formation = f;
      w.retreat_case_violated = true;
      w.clause = "both histories reach the third formation, but the retreat history requires the first";
      return w;
    }
    // Still in the second formation.
    for (const auto& old : seen) {
      if (old.robots == next.robots) {
        w.looped = true;
        w.advance_case_violated = w.retreat_case_violated = true;
        w.clause = "deterministic repetition inside the second formation: neither required successor is ever reached";
        return w;
      }
    }
    seen.push_back(next);
    world = next;
  }
  w.bound_exhausted = true;
  w.advance_case_violated = w.retreat_case_violated = true;
  w.clause = "no formation change within " + std::to_string(max_rounds) +
             " synchronous rounds (bounded-horizon verdict)";
  return w;
}

// ---------------------------------------------------------------------------
// Adversarial search for FCOM programs on the independent oscillation problem.

struct IopSearchParams {
  int depth = 12;            // max rounds per candidate schedule
  int instance_scalings = 3; // gaps multiplied by 1, 2, 4, ...
  int min_cycles = 1;
  std::uint64_t seed = 1;
  int random_schedules = 16;
  int exhaustive_depth = 3;  // exhaustive subset sequences up to this length
};

struct IopWitness {
  std::string program;
  IOPInstance instance;
  Schedule schedule;
  Trace trace;
  Verdict verdict;
  std::string strategy;
};

namespace detail {

inline Schedule make_ssync_schedule(std::vector<Round> rounds, int robot_count) {
  Schedule s;
  s.kind = SchedulerKind::Ssync;
  s.robot_count = robot_count;
  s.rounds = std::move(rounds);
  s.fairness_window = std::max<std::size_t>(s.rounds.size(), 3 * robot_count);
  return s;
}

// Proof-pattern schedule: run full rounds until the chosen terminal first
// computes a non-null move, then activate only that terminal twice. The
// second activation may carry a rescaled frame. Falls back to plain full
// rounds when the terminal never moves within the depth bound.
inline Schedule proof_strategy_schedule(const Program& program, const IOPInstance& instance,
                                        int terminal_id, int depth, bool rescale_second_frame) {
  const WorldState start = instance.initial_world();
  std::vector<Round> rounds;
  std::vector<int> all_ids;
  for (const auto& r : start.robots) all_ids.push_back(r.id);

  WorldState world = start;
  for (int t = 0; t < depth; ++t) {
    const Robot& terminal = world.robot(terminal_id);
    const Transform frame = Transform::frame_at(RotScale::identity(), terminal.current_position());
    const Snapshot snap = take_snapshot(world, terminal_id, program.model(), frame);
    const ProgramOutput out = program.compute(snap);
    if (!(out.destination == Point{})) {
      Round first{{terminal_id}, {{terminal_id, RotScale::identity()}}};
      const RotScale second_frame =
          rescale_second_frame ? make_rotscale(1, 2, 0, 1) : RotScale::identity();
      Round second{{terminal_id}, {{terminal_id, second_frame}}};
      rounds.push_back(std::move(first));
      rounds.push_back(std::move(second));
      return make_ssync_schedule(std::move(rounds), static_cast<int>(start.robots.size()));
    }
    rounds.push_back(Round{all_ids, {}});
    try {
      world = apply_round(world, all_ids, program, program.model());
      check_no_collision(world);
    } catch (const CollisionError&) {
      break;  // the replay under try_schedule will convict this program
    }
  }
  return make_ssync_schedule(std::move(rounds), static_cast<int>(start.robots.size()));
}

}  // namespace detail

/// Bounded search over semi-synchronous schedules and scaled instances for a
/// trace on which the oscillation predicate fails. Deterministic: candidates
/// are tried in a fixed order and the first failure is returned.
inline std::optional<IopWitness> iop_fcom_search(const Program& program,
                                                 const IOPInstance& base_instance,
                                                 const IopSearchParams& params = {}) {
  if (program.model() != Model::Fcom)
    throw std::invalid_argument("iop_fcom_search requires an FCOM program");
  base_instance.validate();
  if (params.depth <= 0) return std::nullopt;

  auto try_schedule = [&](const IOPInstance& instance, const Schedule& schedule,
                          const std::string& strategy) -> std::optional<IopWitness> {
    if (schedule.length() == 0) return std::nullopt;
    const WorldState start = instance.initial_world();
    Trace partial;
    partial.meta.algorithm = program.name();
    partial.meta.model = program.model();
    partial.meta.scheduler = schedule.kind;
    partial.meta.robot_count = static_cast<int>(start.robots.size());
    partial.initial = start;

    Verdict verdict;
    try {
      const Trace trace = run(start, program, program.model(), schedule);
      verdict = check_iop(trace, instance, params.min_cycles);
      if (verdict.pass) return std::nullopt;
      partial = trace;
    } catch (const CollisionError& e) {
      verdict.pass = false;
      verdict.violation = {0, "collision", e.what()};
    }
    return IopWitness{program.name(), instance, schedule, std::move(partial), std::move(verdict),
                      strategy};
  };

  IOPInstance instance = base_instance;
  for (int scaling = 0; scaling < std::max(1, params.instance_scalings); ++scaling) {
    if (scaling > 0) instance = instance.scaled(Scalar(2));
    const WorldState start = instance.initial_world();
    const int robot_count = static_cast<int>(start.robots.size());

    // Terminal ids in world order; the proof pattern targets each in turn.
    std::vector<int> terminal_ids;
    for (const auto& r : start.robots)
      if (r.current_position() != instance.middle) terminal_ids.push_back(r.id);

    for (int terminal : terminal_ids) {
      for (bool rescale : {false, true}) {
        const Schedule sched =
            detail::proof_strategy_schedule(program, instance, terminal, params.depth, rescale);
        if (auto w = try_schedule(instance, sched,
                                  "repeat-activation of terminal " + std::to_string(terminal) +
                                      (rescale ? " with rescaled frame" : "")))
          return w;
      }
    }

    // Exhaustive short subset sequences, lexicographic order.
    std::vector<std::vector<int>> subsets;
    for (int mask = 1; mask < (1 << robot_count); ++mask) {
      std::vector<int> s;
      for (int i = 0; i < robot_count; ++i)
        if (mask & (1 << i)) s.push_back(i);
      subsets.push_back(std::move(s));
    }
    const int max_len = std::min(params.exhaustive_depth, params.depth);
    std::vector<std::size_t> pick;
    std::function<std::optional<IopWitness>(int)> enumerate =
        [&](int remaining) -> std::optional<IopWitness> {
      if (!pick.empty()) {
        std::vector<Round> rounds;
        for (std::size_t idx : pick) rounds.push_back(Round{subsets[idx], {}});
        const Schedule sched = detail::make_ssync_schedule(std::move(rounds), robot_count);
        if (auto w = try_schedule(instance, sched, "exhaustive subset sequence")) return w;
      }
      if (remaining == 0) return std::nullopt;
      for (std::size_t idx = 0; idx < subsets.size(); ++idx) {
        pick.push_back(idx);
        if (auto w = enumerate(remaining - 1)) return w;
        pick.pop_back();
      }
      return std::nullopt;
    };
    if (auto w = enumerate(max_len)) return w;

    // Seeded random schedules at full depth.
    for (int i = 0; i < params.random_schedules; ++i) {
      AdversaryParams ap;
      ap.seed = params.seed + static_cast<std::uint64_t>(i) +
                (static_cast<std::uint64_t>(scaling) << 32);
      ap.horizon = static_cast<std::size_t>(params.depth);
      ap.fairness_window = std::min<std::size_t>(ap.horizon, robot_count + 1);
      const Schedule sched = generate_ssync(ap, robot_count);
      if (auto w = try_schedule(instance, sched, "seeded random semi-synchronous schedule"))
        return w;
    }
  }
  return std::nullopt;
}

}  // namespace lcmsim
