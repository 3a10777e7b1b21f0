#pragma once

// Canonical problem instances at rational coordinates, formation
// classification up to chirality-preserving similarity, and the three trace
// predicates with finite-horizon verdicts.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lcmsim/engine.hpp"
#include "lcmsim/geometry.hpp"
#include "lcmsim/trace.hpp"

namespace lcmsim {

// The three named formations of a problem instance plus "anything else".
enum class Formation { First, Second, Third, Other };

inline std::string formation_name(Formation f) {
  switch (f) {
    case Formation::First: return "I";
    case Formation::Second: return "II";
    case Formation::Third: return "III";
    case Formation::Other: return "Other";
  }
  throw std::logic_error("bad formation");
}

// ---------------------------------------------------------------------------
// Oscillation problem: four robots, three stationary on a triangle and one
// oscillating through center -> near stop -> far stop -> near stop -> center.

struct OCInstance {
  std::array<Point, 3> triangle{make_point(1, 0), make_point(-1, 0), make_point(0, 1)};
  Point center = make_point(0, 0);         // equidistant from the triangle
  Point near_stop = make_point(0, 1, 1, 2);   // (0, 1/2)
  Point far_stop = make_point(0, 1, 3, 4);    // (0, 3/4)

  std::vector<Point> formation_points(Formation f) const {
    Point fourth;
    switch (f) {
      case Formation::First: fourth = center; break;
      case Formation::Second: fourth = near_stop; break;
      case Formation::Third: fourth = far_stop; break;
      default: throw std::invalid_argument("no template for Other");
    }
    return {triangle[0], triangle[1], triangle[2], fourth};  // mover last
  }

  WorldState initial_world() const { return make_world(formation_points(Formation::First)); }

  /// The triangle vertex at the right angle; the oscillation axis runs from
  /// the center toward it.
  Point apex() const {
    std::optional<Point> found;
    for (std::size_t i = 0; i < 3; ++i) {
      const Point& v = triangle[i];
      const Point u = triangle[(i + 1) % 3] - v;
      const Point w = triangle[(i + 2) % 3] - v;
      if (dot(u, w) == 0) {
        if (found) throw std::invalid_argument("triangle has more than one right angle");
        found = v;
      }
    }
    if (!found) throw std::invalid_argument("triangle has no right angle");
    return *found;
  }

  void validate() const {
    const auto first = formation_points(Formation::First);
    const auto idx = equidistant_index(first);
    if (!idx || *idx != 3)
      throw std::invalid_argument("center is not the unique equidistant point");
    const Point top = apex();
    if (!strictly_between(near_stop, center, top) || !strictly_between(far_stop, center, top))
      throw std::invalid_argument("stops must lie between the center and the apex");
    if (near_stop == far_stop) throw std::invalid_argument("stops coincide");

    const auto second = formation_points(Formation::Second);
    const auto third = formation_points(Formation::Third);
    if (match_up_to_similarity(first, second) || match_up_to_similarity(first, third) ||
        match_up_to_similarity(second, third))
      throw std::invalid_argument("formations are not pairwise distinguishable");
    if (equidistant_index(second) || equidistant_index(third))
      throw std::invalid_argument("a non-initial formation has an equidistant point");
    for (const auto& formation : {first, second, third})
      if (chirality_symmetries(formation) != 1)
        throw std::invalid_argument("a symmetric formation would leave the mover role ambiguous");
  }
};

// ---------------------------------------------------------------------------
// Two-stage line formation: the rotator swings onto the line through pivot
// and anchor, then the pivot steps aside to the final pattern.

struct ILInstance {
  Point rotator = make_point(0, -1);
  Point pivot = make_point(0, 0);
  Point anchor = make_point(2, 0);
  Point rotator_target = make_point(-1, 0);  // 90 degrees clockwise about the pivot
  Point pivot_target = make_point(2, 1);

  std::vector<Point> formation_points(Formation f) const {
    switch (f) {
      case Formation::First: return {rotator, pivot, anchor};
      case Formation::Second: return {rotator_target, pivot, anchor};
      case Formation::Third: return {rotator_target, pivot_target, anchor};
      default: throw std::invalid_argument("no template for Other");
    }
  }

  WorldState initial_world() const { return make_world(formation_points(Formation::First)); }

  void validate() const {
    if (rotate90_cw(rotator, pivot) != rotator_target)
      throw std::invalid_argument("rotator_target is not the clockwise rotation about the pivot");
    if (!strictly_between(pivot, rotator_target, anchor))
      throw std::invalid_argument("pivot must sit strictly between rotator_target and anchor");

    const auto first = formation_points(Formation::First);
    const auto second = formation_points(Formation::Second);
    const auto third = formation_points(Formation::Third);
    if (match_up_to_similarity(first, second) || match_up_to_similarity(first, third) ||
        match_up_to_similarity(second, third))
      throw std::invalid_argument("formations are not pairwise distinguishable");
    for (const auto& formation : {first, second, third})
      if (chirality_symmetries(formation) != 1)
        throw std::invalid_argument("a symmetric formation would leave robot roles ambiguous");

    // Exactly one start robot reaches the second formation by a quarter turn
    // about the pivot, and it is the rotator.
    int rotation_matches = 0;
    for (const Point& mover : first) {
      std::vector<Point> rotated;
      for (const Point& p : first) rotated.push_back(p == mover ? rotate90_cw(p, pivot) : p);
      bool dup = false;
      for (std::size_t i = 0; i < rotated.size() && !dup; ++i)
        for (std::size_t j = i + 1; j < rotated.size(); ++j)
          if (rotated[i] == rotated[j]) { dup = true; break; }
      if (!dup && match_up_to_similarity(rotated, second)) {
        ++rotation_matches;
        if (mover != rotator)
          throw std::invalid_argument("a robot other than the rotator also reaches the line");
      }
    }
    if (rotation_matches != 1)
      throw std::invalid_argument("the quarter-turn move to the line is not unique");

    // The rotator's straight transit must touch the pivot-anchor line only at
    // its endpoint, so no intermediate state looks like the line formation.
    const Point dir = rotator_target - rotator;
    const Point line = anchor - pivot;
    const Scalar a = cross(line, rotator - pivot);
    const Scalar b = cross(line, dir);
    if (b == 0) throw std::invalid_argument("rotator transit is parallel to the line");
    if (checked_div(-a, b) != 1)
      throw std::invalid_argument("rotator transit crosses the line before its endpoint");
  }
};

// ---------------------------------------------------------------------------
// Independent oscillation: two terminal robots double and halve their
// distance to a stationary middle robot, independently of each other.

struct IOPInstance {
  Point middle = make_point(0, 0);
  Point direction = make_point(1, 0);  // any nonzero rational vector along the line
  Scalar gap_low = Scalar(1);          // initial offsets of the two terminals,
  Scalar gap_high = make_scalar(3, 2); // in |direction| units

  Point terminal_low() const { return middle - (gap_low * direction); }
  Point terminal_high() const { return middle + (gap_high * direction); }

  WorldState initial_world() const {
    return make_world({terminal_low(), middle, terminal_high()});
  }

  IOPInstance scaled(const Scalar& factor) const {
    IOPInstance out = *this;
    out.gap_low = gap_low * factor;
    out.gap_high = gap_high * factor;
    return out;
  }

  void validate() const {
    if (direction == Point{}) throw std::invalid_argument("direction must be nonzero");
    if (gap_low <= 0 || gap_high <= 0) throw std::invalid_argument("gaps must be positive");
    if (!strictly_between(middle, terminal_low(), terminal_high()))
      throw std::invalid_argument("middle robot must sit strictly between the terminals");
  }
};

inline std::tuple<OCInstance, ILInstance, IOPInstance> default_instances() {
  OCInstance oc;
  ILInstance il;
  IOPInstance iop;
  oc.validate();
  il.validate();
  iop.validate();
  return {oc, il, iop};
}

// ---------------------------------------------------------------------------
// Verdicts

struct ViolationLocator {
  std::uint64_t event_index = 0;
  std::string rule;
  std::string detail;
};

struct Verdict {
  bool pass = false;
  std::map<std::string, std::int64_t> counters;
  std::optional<ViolationLocator> violation;
};

namespace detail {

template <typename InstanceT>
Formation classify(const WorldState& world, const InstanceT& instance, std::size_t robots) {
  if (world.robots.size() != robots)
    throw std::invalid_argument("world has the wrong robot count for this instance");
  const auto positions = world.current_positions();
  for (Formation f : {Formation::First, Formation::Second, Formation::Third}) {
    if (match_up_to_similarity(instance.formation_points(f), positions)) return f;
  }
  return Formation::Other;
}

}  // namespace detail

/// Classifies the current positions against the instance templates up to
/// chirality-preserving similarity. Mid-move worlds usually classify Other.
inline Formation classify_oc(const WorldState& world, const OCInstance& instance) {
  return detail::classify(world, instance, 4);
}

inline Formation classify_il(const WorldState& world, const ILInstance& instance) {
  return detail::classify(world, instance, 3);
}

/// The formation sequence (classified by positions at every event, with
/// transitional states dropped and duplicates compressed) must follow
/// First, Second, Third, Second, First, ... for at least `min_cycles` full
/// periods, and no all-idle state may fall outside the three formations.
inline Verdict check_oc(const Trace& trace, const OCInstance& instance, int min_cycles) {
  static constexpr Formation kWord[4] = {Formation::First, Formation::Second, Formation::Third,
                                         Formation::Second};
  Verdict verdict;
  std::size_t entries = 0;
  Formation last = Formation::Other;

  bool failed = false;
  std::vector<Point> prev_positions;
  Formation prev_formation = Formation::Other;
  trace.for_each_state([&](const WorldState& w) {
    if (failed) return;
    // Most events do not move anyone; reclassify only when positions change.
    std::vector<Point> positions = w.current_positions();
    if (positions != prev_positions) prev_formation = classify_oc(w, instance);
    prev_positions = std::move(positions);
    const Formation f = prev_formation;
    if (f == Formation::Other) {
      if (w.all_idle()) {
        verdict.violation = {w.event_index, "idle-configuration",
                             "idle state matches no formation"};
        failed = true;
      }
      return;  // a robot is in transit
    }
    if (entries > 0 && f == last) return;
    const Formation expected = kWord[entries % 4];
    if (f != expected) {
      verdict.violation = {w.event_index, "formation-order",
                           "saw " + formation_name(f) + " where " + formation_name(expected) +
                               " was required"};
      failed = true;
      return;
    }
    last = f;
    ++entries;
  });

  const std::int64_t periods = entries == 0 ? 0 : static_cast<std::int64_t>((entries - 1) / 4);
  verdict.counters["periods"] = periods;
  verdict.counters["formation_changes"] = static_cast<std::int64_t>(entries);
  if (failed) return verdict;
  if (periods < min_cycles) {
    verdict.violation = {trace.final_state().event_index, "liveness",
                         "completed " + std::to_string(periods) + " periods, required " +
                             std::to_string(min_cycles)};
    return verdict;
  }
  verdict.pass = true;
  return verdict;
}

namespace detail {

inline const std::vector<RotScale>& probe_multipliers() {
  static const std::vector<RotScale> probes = {
      RotScale::identity(),      make_rotscale(0, 1, 1, 1),  make_rotscale(2, 1, 0, 1),
      make_rotscale(1, 1, 1, 1), make_rotscale(-1, 1, 1, 1), make_rotscale(1, 1, -2, 1),
      make_rotscale(3, 1, 2, 1), make_rotscale(1, 2, 0, 1),  make_rotscale(0, 1, -1, 2)};
  return probes;
}

}  // namespace detail

/// True iff every robot of `world`, activated once more under each probe
/// frame, would neither move nor change its light.
inline bool is_quiescent(const WorldState& world, const Program& program) {
  if (!world.all_idle()) return false;
  for (const auto& robot : world.robots) {
    for (const auto& m : detail::probe_multipliers()) {
      const Transform frame = Transform::frame_at(m, robot.current_position());
      const Snapshot snap = take_snapshot(world, robot.id, program.model(), frame);
      const ProgramOutput out = program.compute(snap);
      if (!is_null_cycle(out, robot.light)) return false;
    }
  }
  return true;
}

/// The compressed formation sequence (positions at every event, transitional
/// states dropped) must be exactly First, Second, Third and the final world
/// must be quiescent under the given program.
inline Verdict check_il(const Trace& trace, const ILInstance& instance, const Program& program) {
  static constexpr Formation kWanted[3] = {Formation::First, Formation::Second, Formation::Third};
  Verdict verdict;
  std::size_t entries = 0;
  Formation last = Formation::Other;

  bool failed = false;
  std::vector<Point> prev_positions;
  Formation prev_formation = Formation::Other;
  trace.for_each_state([&](const WorldState& w) {
    if (failed) return;
    std::vector<Point> positions = w.current_positions();
    if (positions != prev_positions) prev_formation = classify_il(w, instance);
    prev_positions = std::move(positions);
    const Formation f = prev_formation;
    if (f == Formation::Other) {
      if (w.all_idle()) {
        verdict.violation = {w.event_index, "idle-configuration",
                             "idle state matches no formation"};
        failed = true;
      }
      return;  // a robot is in transit
    }
    if (entries > 0 && f == last) return;
    if (entries >= 3 || f != kWanted[entries]) {
      verdict.violation = {w.event_index, "formation-order",
                           "saw " + formation_name(f) + " outside the required progression"};
      failed = true;
      return;
    }
    last = f;
    ++entries;
  });

  verdict.counters["formation_changes"] = static_cast<std::int64_t>(entries);
  if (failed) return verdict;
  if (entries < 3) {
    verdict.violation = {trace.final_state().event_index, "liveness",
                         "final formation was never reached"};
    return verdict;
  }
  if (!trace.final_state().all_idle()) {
    verdict.violation = {trace.final_state().event_index, "quiescence", "trace ends mid-cycle"};
    return verdict;
  }
  if (!is_quiescent(trace.final_state(), program)) {
    verdict.violation = {trace.final_state().event_index, "quiescence",
                         "some robot would still act in the final state"};
    return verdict;
  }
  verdict.pass = true;
  return verdict;
}

/// Per terminal: the squared distance to the middle robot must oscillate
/// between its initial value s0 and 4*s0 (distance doubling), monotonically
/// within each leg, with at least 2*min_cycles milestones; the middle robot
/// must be bitwise stationary.
inline Verdict check_iop(const Trace& trace, const IOPInstance& instance, int min_cycles) {
  Verdict verdict;
  const WorldState& start = trace.initial;
  if (start.robots.size() != 3)
    throw std::invalid_argument("independent oscillation needs exactly 3 robots");

  int middle_id = -1;
  for (const auto& r : start.robots)
    if (r.current_position() == instance.middle) middle_id = r.id;
  if (middle_id < 0)
    throw std::invalid_argument("no robot starts at the instance's middle position");

  struct TerminalScan {
    int id = 0;
    Scalar base;      // s0
    Scalar ceiling;   // 4*s0
    Scalar prev;
    bool ascending = true;
    std::int64_t milestones = 0;
  };
  std::vector<TerminalScan> terminals;
  for (const auto& r : start.robots) {
    if (r.id == middle_id) continue;
    TerminalScan t;
    t.id = r.id;
    t.base = squared_distance(r.current_position(), instance.middle);
    t.ceiling = 4 * t.base;
    t.prev = t.base;
    terminals.push_back(std::move(t));
  }

  bool failed = false;
  trace.for_each_state([&](const WorldState& w) {
    if (failed) return;
    if (w.robot(middle_id).current_position() != instance.middle) {
      verdict.violation = {w.event_index, "middle-stationary", "the middle robot moved"};
      failed = true;
      return;
    }
    for (auto& t : terminals) {
      const Scalar s = squared_distance(w.robot(t.id).current_position(), instance.middle);
      if (s < t.base || s > t.ceiling) {
        verdict.violation = {w.event_index, "range",
                             "terminal " + std::to_string(t.id) +
                                 " left the [initial, doubled] distance band"};
        failed = true;
        return;
      }
      if (t.ascending) {
        if (s < t.prev) {
          verdict.violation = {w.event_index, "monotone-ascending",
                               "terminal " + std::to_string(t.id) +
                                   " backed up before reaching the doubled distance"};
          failed = true;
          return;
        }
        if (s == t.ceiling) {
          ++t.milestones;
          t.ascending = false;
        }
      } else {
        if (s > t.prev) {
          verdict.violation = {w.event_index, "monotone-descending",
                               "terminal " + std::to_string(t.id) +
                                   " backed up before returning to the initial distance"};
          failed = true;
          return;
        }
        if (s == t.base) {
          ++t.milestones;
          t.ascending = true;
        }
      }
      t.prev = s;
    }
  });

  for (const auto& t : terminals)
    verdict.counters["milestones_robot" + std::to_string(t.id)] = t.milestones;
  if (failed) return verdict;
  for (const auto& t : terminals) {
    if (t.milestones < 2 * static_cast<std::int64_t>(min_cycles)) {
      verdict.violation = {trace.final_state().event_index, "liveness",
                           "terminal " + std::to_string(t.id) + " logged " +
                               std::to_string(t.milestones) + " milestones, required " +
                               std::to_string(2 * min_cycles)};
      return verdict;
    }
  }
  verdict.pass = true;
  return verdict;
}

}  // namespace lcmsim
