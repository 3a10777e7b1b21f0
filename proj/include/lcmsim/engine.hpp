#pragma once

// World state and the event-level semantics of Look-Compute-Move cycles.
//
// A robot's cycle is Idle -> PendingCompute -> Moving -> Idle. Look is
// instantaneous (apply_activate), the light becomes visible exactly when the
// Compute finishes (apply_finish_compute), and movement is a rigid straight
// line whose pacing the adversary controls (apply_progress). Synchronous
// rounds execute whole cycles atomically against the pre-round world.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "lcmsim/geometry.hpp"

namespace lcmsim {

enum class Model { Oblot, Fsta, Fcom, Lumi };

inline std::string model_name(Model m) {
  switch (m) {
    case Model::Oblot: return "OBLOT";
    case Model::Fsta: return "FSTA";
    case Model::Fcom: return "FCOM";
    case Model::Lumi: return "LUMI";
  }
  throw std::logic_error("bad model");
}

inline Model model_from_name(const std::string& s) {
  if (s == "OBLOT") return Model::Oblot;
  if (s == "FSTA") return Model::Fsta;
  if (s == "FCOM") return Model::Fcom;
  if (s == "LUMI") return Model::Lumi;
  throw std::invalid_argument("unknown model: " + s);
}

// Lights are colors from a small per-algorithm palette; NIL is always the
// initial color.
using Color = std::string;
inline const Color kNil = "NIL";

struct IllegalEvent : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CollisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SnapshotShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IdlePhase {
  Point position;
};
struct PendingComputePhase {
  Point position;       // where the Look happened; the robot sits here
  Color pending_light;  // not visible until the compute finishes
  Point pending_destination;
};
struct MovingPhase {
  Point start;
  Point destination;
  Scalar progress;  // in (0,1) while moving; strictly increasing
};

using Phase = std::variant<IdlePhase, PendingComputePhase, MovingPhase>;

inline bool operator==(const IdlePhase& a, const IdlePhase& b) {
  return a.position == b.position;
}
inline bool operator==(const PendingComputePhase& a, const PendingComputePhase& b) {
  return a.position == b.position && a.pending_light == b.pending_light &&
         a.pending_destination == b.pending_destination;
}
inline bool operator==(const MovingPhase& a, const MovingPhase& b) {
  return a.start == b.start && a.destination == b.destination && a.progress == b.progress;
}

struct Robot {
  int id = 0;
  Phase phase = IdlePhase{};
  Color light = kNil;

  bool idle() const { return std::holds_alternative<IdlePhase>(phase); }

  Point current_position() const {
    if (const auto* p = std::get_if<IdlePhase>(&phase)) return p->position;
    if (const auto* p = std::get_if<PendingComputePhase>(&phase)) return p->position;
    const auto& m = std::get<MovingPhase>(phase);
    return m.start + m.progress * (m.destination - m.start);
  }

  friend bool operator==(const Robot& a, const Robot& b) {
    return a.id == b.id && a.light == b.light && a.phase == b.phase;
  }
};

struct WorldState {
  std::vector<Robot> robots;
  std::uint64_t event_index = 0;

  const Robot& robot(int id) const {
    for (const auto& r : robots)
      if (r.id == id) return r;
    throw std::invalid_argument("no robot with id " + std::to_string(id));
  }
  Robot& robot(int id) {
    for (auto& r : robots)
      if (r.id == id) return r;
    throw std::invalid_argument("no robot with id " + std::to_string(id));
  }

  bool all_idle() const {
    return std::all_of(robots.begin(), robots.end(), [](const Robot& r) { return r.idle(); });
  }

  std::vector<Point> current_positions() const {
    std::vector<Point> ps;
    ps.reserve(robots.size());
    for (const auto& r : robots) ps.push_back(r.current_position());
    return ps;
  }

  friend bool operator==(const WorldState& a, const WorldState& b) {
    return a.event_index == b.event_index && a.robots == b.robots;
  }
};

inline WorldState make_world(const std::vector<Point>& positions) {
  WorldState w;
  for (std::size_t i = 0; i < positions.size(); ++i)
    w.robots.push_back(Robot{static_cast<int>(i), IdlePhase{positions[i]}, kNil});
  return w;
}

inline void check_no_collision(const WorldState& w) {
  const auto ps = w.current_positions();
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = i + 1; j < ps.size(); ++j)
      if (ps[i] == ps[j])
        throw CollisionError("robots " + std::to_string(w.robots[i].id) + " and " +
                             std::to_string(w.robots[j].id) + " coincide at event " +
                             std::to_string(w.event_index));
}

// What one robot sees in a Look. The observer always sits at the origin of
// its own frame; light fields are filtered by the model:
//   OBLOT: no lights at all.  FSTA: own light only.
//   FCOM:  others' lights only.  LUMI: all lights.
struct SeenRobot {
  Point position;
  std::optional<Color> light;

  friend bool operator==(const SeenRobot& a, const SeenRobot& b) {
    return a.position == b.position && a.light == b.light;
  }
};

struct Snapshot {
  Model model = Model::Oblot;
  std::vector<SeenRobot> others;  // sorted by position for determinism
  std::optional<Color> own_light;

  friend bool operator==(const Snapshot& a, const Snapshot& b) {
    return a.model == b.model && a.others == b.others && a.own_light == b.own_light;
  }

  std::vector<Point> all_points() const {
    std::vector<Point> ps;
    ps.reserve(others.size() + 1);
    ps.push_back(Point{});  // self at the origin, always index 0
    for (const auto& o : others) ps.push_back(o.position);
    return ps;
  }
};

inline bool others_lights_visible(Model m) { return m == Model::Fcom || m == Model::Lumi; }
inline bool own_light_visible(Model m) { return m == Model::Fsta || m == Model::Lumi; }

inline Snapshot take_snapshot(const WorldState& world, int robot_id, Model model,
                              const Transform& frame) {
  const Robot& self = world.robot(robot_id);
  const Point origin{};
  if (apply_transform(frame, self.current_position()) != origin)
    throw std::invalid_argument("frame does not map the observing robot to the origin");

  Snapshot snap;
  snap.model = model;
  if (own_light_visible(model)) snap.own_light = self.light;
  for (const auto& r : world.robots) {
    if (r.id == robot_id) continue;
    SeenRobot seen;
    seen.position = apply_transform(frame, r.current_position());
    if (others_lights_visible(model)) seen.light = r.light;
    snap.others.push_back(std::move(seen));
  }
  std::sort(snap.others.begin(), snap.others.end(),
            [](const SeenRobot& a, const SeenRobot& b) { return a.position < b.position; });
  return snap;
}

// A robot program: a deterministic pure map from snapshot to a light command
// and a destination in the robot's own frame. A light command of nullopt
// keeps the current color (an FCOM robot cannot even name its own color).
struct ProgramOutput {
  std::optional<Color> light;
  Point destination;  // local frame; origin = stay put
};

class Program {
 public:
  virtual ~Program() = default;
  virtual std::string name() const = 0;
  virtual Model model() const = 0;
  virtual const std::vector<Color>& palette() const = 0;
  virtual ProgramOutput compute(const Snapshot& snapshot) const = 0;
};

inline bool is_null_cycle(const ProgramOutput& out, const Color& current_light) {
  const bool stays = out.destination == Point{};
  const bool keeps_light = !out.light || *out.light == current_light;
  return stays && keeps_light;
}

inline WorldState apply_activate(const WorldState& world, int robot_id, const Program& program,
                                 Model model, const Transform& frame) {
  WorldState next = world;
  Robot& r = next.robot(robot_id);
  if (!r.idle()) throw IllegalEvent("activate: robot " + std::to_string(robot_id) + " not idle");
  const Point pos = r.current_position();

  const Snapshot snap = take_snapshot(world, robot_id, model, frame);
  const ProgramOutput out = program.compute(snap);

  Color pending = out.light.value_or(r.light);
  const auto pal = program.palette();
  if (std::find(pal.begin(), pal.end(), pending) == pal.end())
    throw IllegalEvent("program emitted a color outside its palette: " + pending);

  const Point dest_world = apply_transform(inverse(frame), out.destination);
  r.phase = PendingComputePhase{pos, std::move(pending), dest_world};
  return next;
}

inline WorldState apply_finish_compute(const WorldState& world, int robot_id) {
  WorldState next = world;
  Robot& r = next.robot(robot_id);
  const auto* pending = std::get_if<PendingComputePhase>(&r.phase);
  if (!pending)
    throw IllegalEvent("finish_compute: robot " + std::to_string(robot_id) + " has no pending compute");
  r.light = pending->pending_light;  // the light becomes visible now
  if (pending->pending_destination == pending->position) {
    r.phase = IdlePhase{pending->position};  // null move: skip the Moving phase
  } else {
    r.phase = MovingPhase{pending->position, pending->pending_destination, Scalar(0)};
  }
  return next;
}

inline WorldState apply_progress(const WorldState& world, int robot_id, const Scalar& delta) {
  WorldState next = world;
  Robot& r = next.robot(robot_id);
  auto* moving = std::get_if<MovingPhase>(&r.phase);
  if (!moving) throw IllegalEvent("progress: robot " + std::to_string(robot_id) + " not moving");
  if (delta <= 0 || delta > Scalar(1) - moving->progress)
    throw IllegalEvent("progress: delta out of range for robot " + std::to_string(robot_id));
  moving->progress += delta;
  if (moving->progress == 1) r.phase = IdlePhase{moving->destination};
  return next;
}

/// One synchronous round: all active robots Look against the same pre-round
/// world, then every light change and full move lands atomically.
inline WorldState apply_round(const WorldState& world, const std::vector<int>& active_set,
                              const Program& program, Model model,
                              const std::vector<std::pair<int, RotScale>>& frames = {}) {
  if (active_set.empty()) throw IllegalEvent("round: empty active set");
  if (!world.all_idle()) throw IllegalEvent("round: some robot is mid-cycle");

  auto frame_for = [&](int id, const Point& pos) {
    for (const auto& [rid, m] : frames)
      if (rid == id) return Transform::frame_at(m, pos);
    return Transform::frame_at(RotScale::identity(), pos);
  };

  WorldState next = world;
  for (int id : active_set) {
    const Robot& r = world.robot(id);
    const Point pos = r.current_position();
    const Transform frame = frame_for(id, pos);
    const Snapshot snap = take_snapshot(world, id, model, frame);
    const ProgramOutput out = program.compute(snap);

    Color light = out.light.value_or(r.light);
    const auto pal = program.palette();
    if (std::find(pal.begin(), pal.end(), light) == pal.end())
      throw IllegalEvent("program emitted a color outside its palette: " + light);

    Robot& target = next.robot(id);
    target.light = std::move(light);
    target.phase = IdlePhase{apply_transform(inverse(frame), out.destination)};
  }
  return next;
}

}  // namespace lcmsim
