#pragma once

// Event-indexed traces and the deterministic run loop that drives a program
// through a schedule.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lcmsim/engine.hpp"
#include "lcmsim/schedule.hpp"

namespace lcmsim {

struct EventDescriptor {
  enum class Kind { Activate, FinishCompute, Progress, Round };
  Kind kind = Kind::Activate;
  int robot = -1;
  Scalar delta{};
  std::optional<RotScale> frame;
  std::vector<int> active;                       // Round only
  std::vector<std::pair<int, RotScale>> frames;  // Round only
  bool noop = false;  // Progress scheduled for a robot whose move was null
};

inline std::string event_kind_name(EventDescriptor::Kind k) {
  switch (k) {
    case EventDescriptor::Kind::Activate: return "activate";
    case EventDescriptor::Kind::FinishCompute: return "finish_compute";
    case EventDescriptor::Kind::Progress: return "progress";
    case EventDescriptor::Kind::Round: return "round";
  }
  throw std::logic_error("bad event kind");
}

struct TraceMeta {
  std::string algorithm;
  Model model = Model::Oblot;
  SchedulerKind scheduler = SchedulerKind::Async;
  int robot_count = 0;
  std::string problem;        // "oc", "il", "iop" or empty
  std::string instance_json;  // opaque echo of the instance, may be empty
};

struct TraceStep {
  EventDescriptor event;
  WorldState after;

  friend bool operator==(const TraceStep& a, const TraceStep& b) {
    return a.after == b.after;  // the world embeds the event's full effect
  }
};

struct Trace {
  TraceMeta meta;
  WorldState initial;
  std::vector<TraceStep> steps;

  const WorldState& final_state() const { return steps.empty() ? initial : steps.back().after; }

  template <typename F>
  void for_each_state(F&& f) const {
    f(initial);
    for (const auto& s : steps) f(s.after);
  }
};

/// Streaming observer: called once per executed event with the resulting
/// world, so long runs need no in-memory accumulation downstream.
using TraceSink = std::function<void(const EventDescriptor&, const WorldState&)>;

/// Executes `schedule` and returns the full trace. Deterministic in its
/// inputs. Throws IllegalEvent on a phase-illegal event and CollisionError
/// the moment two robots' current positions coincide.
inline Trace run(const WorldState& world0, const Program& program, Model model,
                 const Schedule& schedule, const TraceSink& sink = {}) {
  Trace trace;
  trace.meta.algorithm = program.name();
  trace.meta.model = model;
  trace.meta.scheduler = schedule.kind;
  trace.meta.robot_count = static_cast<int>(world0.robots.size());
  trace.initial = world0;
  trace.initial.event_index = 0;
  check_no_collision(trace.initial);

  WorldState world = trace.initial;
  auto emit = [&](EventDescriptor ev, WorldState next) {
    next.event_index = world.event_index + 1;
    check_no_collision(next);
    if (sink) sink(ev, next);
    world = next;
    trace.steps.push_back(TraceStep{std::move(ev), std::move(next)});
  };

  if (schedule.kind == SchedulerKind::Async) {
    for (const auto& ev : schedule.events) {
      EventDescriptor desc;
      desc.robot = ev.robot;
      switch (ev.kind) {
        case AsyncEvent::Kind::Activate: {
          desc.kind = EventDescriptor::Kind::Activate;
          desc.frame = ev.frame;
          const Point pos = world.robot(ev.robot).current_position();
          const Transform frame = Transform::frame_at(ev.frame, pos);
          emit(std::move(desc), apply_activate(world, ev.robot, program, model, frame));
          break;
        }
        case AsyncEvent::Kind::FinishCompute:
          desc.kind = EventDescriptor::Kind::FinishCompute;
          emit(std::move(desc), apply_finish_compute(world, ev.robot));
          break;
        case AsyncEvent::Kind::Progress:
          desc.kind = EventDescriptor::Kind::Progress;
          desc.delta = ev.delta;
          if (world.robot(ev.robot).idle()) {
            // The move this pacing was scheduled for turned out null.
            desc.noop = true;
            emit(std::move(desc), world);
          } else {
            emit(std::move(desc), apply_progress(world, ev.robot, ev.delta));
          }
          break;
      }
    }
  } else {
    for (const auto& round : schedule.rounds) {
      EventDescriptor desc;
      desc.kind = EventDescriptor::Kind::Round;
      desc.active = round.active;
      desc.frames = round.frames;
      emit(std::move(desc), apply_round(world, round.active, program, model, round.frames));
    }
  }
  return trace;
}

}  // namespace lcmsim
