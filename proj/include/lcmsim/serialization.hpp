#pragma once

// JSON wire formats. Scalars travel as "num/den" strings, points as
// two-element arrays of such strings, traces as JSON Lines with one record
// per event.

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcmsim/algorithms.hpp"
#include "lcmsim/engine.hpp"
#include "lcmsim/geometry.hpp"
#include "lcmsim/impossibility.hpp"
#include "lcmsim/problems.hpp"
#include "lcmsim/rational.hpp"
#include "lcmsim/relations.hpp"
#include "lcmsim/schedule.hpp"
#include "lcmsim/trace.hpp"

namespace lcmsim {

using Json = nlohmann::json;

inline Json to_json(const Scalar& s) { return scalar_to_string(s); }
inline Scalar scalar_from_json(const Json& j) { return scalar_from_string(j.get<std::string>()); }

inline Json to_json(const Point& p) { return Json::array({to_json(p.x), to_json(p.y)}); }
inline Point point_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("point must be a 2-array");
  return {scalar_from_json(j[0]), scalar_from_json(j[1])};
}

inline Json to_json(const RotScale& m) { return Json::array({to_json(m.re), to_json(m.im)}); }
inline RotScale rotscale_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("multiplier must be a 2-array");
  return {scalar_from_json(j[0]), scalar_from_json(j[1])};
}

// --------------------------------------------------------------------------
// Instances

inline Json to_json(const OCInstance& inst) {
  return Json{{"triangle", Json::array({to_json(inst.triangle[0]), to_json(inst.triangle[1]),
                                        to_json(inst.triangle[2])})},
              {"center", to_json(inst.center)},
              {"near_stop", to_json(inst.near_stop)},
              {"far_stop", to_json(inst.far_stop)}};
}

inline OCInstance oc_instance_from_json(const Json& j) {
  OCInstance inst;
  for (std::size_t i = 0; i < 3; ++i) inst.triangle[i] = point_from_json(j.at("triangle").at(i));
  inst.center = point_from_json(j.at("center"));
  inst.near_stop = point_from_json(j.at("near_stop"));
  inst.far_stop = point_from_json(j.at("far_stop"));
  return inst;
}

inline Json to_json(const ILInstance& inst) {
  return Json{{"rotator", to_json(inst.rotator)},
              {"pivot", to_json(inst.pivot)},
              {"anchor", to_json(inst.anchor)},
              {"rotator_target", to_json(inst.rotator_target)},
              {"pivot_target", to_json(inst.pivot_target)}};
}

inline ILInstance il_instance_from_json(const Json& j) {
  ILInstance inst;
  inst.rotator = point_from_json(j.at("rotator"));
  inst.pivot = point_from_json(j.at("pivot"));
  inst.anchor = point_from_json(j.at("anchor"));
  inst.rotator_target = point_from_json(j.at("rotator_target"));
  inst.pivot_target = point_from_json(j.at("pivot_target"));
  return inst;
}

inline Json to_json(const IOPInstance& inst) {
  return Json{{"middle", to_json(inst.middle)},
              {"direction", to_json(inst.direction)},
              {"gap_low", to_json(inst.gap_low)},
              {"gap_high", to_json(inst.gap_high)}};
}

inline IOPInstance iop_instance_from_json(const Json& j) {
  IOPInstance inst;
  inst.middle = point_from_json(j.at("middle"));
  inst.direction = point_from_json(j.at("direction"));
  inst.gap_low = scalar_from_json(j.at("gap_low"));
  inst.gap_high = scalar_from_json(j.at("gap_high"));
  return inst;
}

// --------------------------------------------------------------------------
// Schedules

inline Json to_json(const Schedule& s) {
  Json j{{"kind", scheduler_name(s.kind)},
         {"robot_count", s.robot_count},
         {"fairness_window", s.fairness_window}};
  if (s.kind == SchedulerKind::Async) {
    Json events = Json::array();
    for (const auto& ev : s.events) {
      Json e;
      switch (ev.kind) {
        case AsyncEvent::Kind::Activate:
          e = Json{{"kind", "activate"}, {"robot", ev.robot}, {"frame", to_json(ev.frame)}};
          break;
        case AsyncEvent::Kind::FinishCompute:
          e = Json{{"kind", "finish_compute"}, {"robot", ev.robot}};
          break;
        case AsyncEvent::Kind::Progress:
          e = Json{{"kind", "progress"}, {"robot", ev.robot}, {"delta", to_json(ev.delta)}};
          break;
      }
      events.push_back(std::move(e));
    }
    j["events"] = std::move(events);
  } else {
    Json rounds = Json::array();
    for (const auto& round : s.rounds) {
      Json frames = Json::object();
      for (const auto& [id, m] : round.frames) frames[std::to_string(id)] = to_json(m);
      rounds.push_back(Json{{"active_set", round.active}, {"frames", std::move(frames)}});
    }
    j["rounds"] = std::move(rounds);
  }
  return j;
}

inline Schedule schedule_from_json(const Json& j) {
  Schedule s;
  s.kind = scheduler_from_name(j.at("kind").get<std::string>());
  s.robot_count = j.at("robot_count").get<int>();
  s.fairness_window = j.at("fairness_window").get<std::size_t>();
  if (s.kind == SchedulerKind::Async) {
    for (const auto& e : j.at("events")) {
      AsyncEvent ev;
      const std::string kind = e.at("kind").get<std::string>();
      ev.robot = e.at("robot").get<int>();
      if (kind == "activate") {
        ev.kind = AsyncEvent::Kind::Activate;
        ev.frame = e.contains("frame") ? rotscale_from_json(e.at("frame")) : RotScale::identity();
      } else if (kind == "finish_compute") {
        ev.kind = AsyncEvent::Kind::FinishCompute;
      } else if (kind == "progress") {
        ev.kind = AsyncEvent::Kind::Progress;
        ev.delta = scalar_from_json(e.at("delta"));
      } else {
        throw std::invalid_argument("unknown event kind: " + kind);
      }
      s.events.push_back(std::move(ev));
    }
  } else {
    for (const auto& r : j.at("rounds")) {
      Round round;
      round.active = r.at("active_set").get<std::vector<int>>();
      if (r.contains("frames"))
        for (const auto& [key, value] : r.at("frames").items())
          round.frames.emplace_back(std::stoi(key), rotscale_from_json(value));
      s.rounds.push_back(std::move(round));
    }
  }
  return s;
}

// --------------------------------------------------------------------------
// World states and traces

inline Json phase_to_json(const Phase& phase) {
  if (const auto* idle = std::get_if<IdlePhase>(&phase))
    return Json{{"state", "idle"}, {"position", to_json(idle->position)}};
  if (const auto* pending = std::get_if<PendingComputePhase>(&phase))
    return Json{{"state", "pending_compute"},
                {"position", to_json(pending->position)},
                {"pending_light", pending->pending_light},
                {"pending_destination", to_json(pending->pending_destination)}};
  const auto& moving = std::get<MovingPhase>(phase);
  return Json{{"state", "moving"},
              {"start", to_json(moving.start)},
              {"destination", to_json(moving.destination)},
              {"progress", to_json(moving.progress)}};
}

inline Phase phase_from_json(const Json& j) {
  const std::string state = j.at("state").get<std::string>();
  if (state == "idle") return IdlePhase{point_from_json(j.at("position"))};
  if (state == "pending_compute")
    return PendingComputePhase{point_from_json(j.at("position")),
                               j.at("pending_light").get<std::string>(),
                               point_from_json(j.at("pending_destination"))};
  if (state == "moving")
    return MovingPhase{point_from_json(j.at("start")), point_from_json(j.at("destination")),
                       scalar_from_json(j.at("progress"))};
  throw std::invalid_argument("unknown phase state: " + state);
}

inline Json world_fields_json(const WorldState& w) {
  Json positions = Json::object();
  Json lights = Json::object();
  Json phases = Json::object();
  for (const auto& r : w.robots) {
    const std::string key = std::to_string(r.id);
    positions[key] = to_json(r.current_position());
    lights[key] = r.light;
    phases[key] = phase_to_json(r.phase);
  }
  return Json{{"positions", std::move(positions)},
              {"lights", std::move(lights)},
              {"phases", std::move(phases)}};
}

inline Json to_json(const WorldState& w) {
  Json j = world_fields_json(w);
  j["event_index"] = w.event_index;
  return j;
}

inline WorldState world_from_json(const Json& j) {
  WorldState w;
  w.event_index = j.value("event_index", 0ULL);
  std::vector<int> ids;
  for (const auto& [key, value] : j.at("phases").items()) ids.push_back(std::stoi(key));
  std::sort(ids.begin(), ids.end());
  for (int id : ids) {
    Robot r;
    r.id = id;
    r.phase = phase_from_json(j.at("phases").at(std::to_string(id)));
    r.light = j.at("lights").at(std::to_string(id)).get<std::string>();
    w.robots.push_back(std::move(r));
  }
  return w;
}

inline Json trace_record(const EventDescriptor& ev, const WorldState& after) {
  Json j = world_fields_json(after);
  j["event_index"] = after.event_index;
  j["kind"] = event_kind_name(ev.kind);
  if (ev.kind == EventDescriptor::Kind::Round) {
    j["active_set"] = ev.active;
    Json frames = Json::object();
    for (const auto& [id, m] : ev.frames) frames[std::to_string(id)] = to_json(m);
    j["frames"] = std::move(frames);
  } else {
    j["robot"] = ev.robot;
    if (ev.kind == EventDescriptor::Kind::Activate && ev.frame) j["frame"] = to_json(*ev.frame);
    if (ev.kind == EventDescriptor::Kind::Progress) {
      j["delta"] = to_json(ev.delta);
      if (ev.noop) j["noop"] = true;
    }
  }
  return j;
}

inline Json meta_record(const TraceMeta& meta) {
  Json j{{"kind", "meta"},
         {"algorithm", meta.algorithm},
         {"model", model_name(meta.model)},
         {"scheduler", scheduler_name(meta.scheduler)},
         {"robot_count", meta.robot_count}};
  if (!meta.problem.empty()) j["problem"] = meta.problem;
  if (!meta.instance_json.empty()) j["instance"] = Json::parse(meta.instance_json);
  return j;
}

inline void write_trace_jsonl(std::ostream& out, const Trace& trace) {
  out << meta_record(trace.meta) << "\n";
  Json init = world_fields_json(trace.initial);
  init["kind"] = "init";
  init["event_index"] = trace.initial.event_index;
  out << init << "\n";
  for (const auto& step : trace.steps) out << trace_record(step.event, step.after) << "\n";
}

inline Trace read_trace_jsonl(std::istream& in) {
  Trace trace;
  std::string line;
  bool have_meta = false;
  bool have_init = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const Json j = Json::parse(line);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "meta") {
      trace.meta.algorithm = j.value("algorithm", "");
      trace.meta.model = model_from_name(j.at("model").get<std::string>());
      trace.meta.scheduler = scheduler_from_name(j.at("scheduler").get<std::string>());
      trace.meta.robot_count = j.at("robot_count").get<int>();
      trace.meta.problem = j.value("problem", "");
      if (j.contains("instance")) trace.meta.instance_json = j.at("instance").dump();
      have_meta = true;
      continue;
    }
    if (kind == "error")
      throw std::runtime_error("trace records a simulation error: " +
                               j.value("error", std::string("unknown")));
    if (kind == "init") {
      trace.initial = world_from_json(j);
      have_init = true;
      continue;
    }
    if (!have_init) throw std::invalid_argument("trace event before the init record");
    EventDescriptor ev;
    if (kind == "activate") {
      ev.kind = EventDescriptor::Kind::Activate;
      ev.robot = j.at("robot").get<int>();
      if (j.contains("frame")) ev.frame = rotscale_from_json(j.at("frame"));
    } else if (kind == "finish_compute") {
      ev.kind = EventDescriptor::Kind::FinishCompute;
      ev.robot = j.at("robot").get<int>();
    } else if (kind == "progress") {
      ev.kind = EventDescriptor::Kind::Progress;
      ev.robot = j.at("robot").get<int>();
      ev.delta = scalar_from_json(j.at("delta"));
      ev.noop = j.value("noop", false);
    } else if (kind == "round") {
      ev.kind = EventDescriptor::Kind::Round;
      ev.active = j.at("active_set").get<std::vector<int>>();
      if (j.contains("frames"))
        for (const auto& [key, value] : j.at("frames").items())
          ev.frames.emplace_back(std::stoi(key), rotscale_from_json(value));
    } else {
      throw std::invalid_argument("unknown trace record kind: " + kind);
    }
    trace.steps.push_back(TraceStep{std::move(ev), world_from_json(j)});
  }
  if (!have_meta || !have_init) throw std::invalid_argument("trace is missing meta or init records");
  return trace;
}

// --------------------------------------------------------------------------
// Verdicts and witnesses

inline Json to_json(const Verdict& v) {
  Json j{{"pass", v.pass}};
  Json counters = Json::object();
  for (const auto& [key, value] : v.counters) counters[key] = value;
  j["counters"] = std::move(counters);
  if (v.violation) {
    j["violation"] = Json{{"event_index", v.violation->event_index},
                          {"rule", v.violation->rule},
                          {"detail", v.violation->detail}};
  } else {
    j["violation"] = nullptr;
  }
  return j;
}

inline Json to_json(const OcWitness& w) {
  Json rounds = Json::array();
  for (const auto& state : w.rounds) rounds.push_back(to_json(state));
  Json violated = Json::array();
  if (w.advance_case_violated) violated.push_back("advance");
  if (w.retreat_case_violated) violated.push_back("retreat");
  return Json{{"kind", "oc-oblot"},
              {"program", w.program},
              {"start", to_json(w.start)},
              {"required", Json{{"advance", "III"}, {"retreat", "I"}}},
              {"rounds", std::move(rounds)},
              {"exit_formation", formation_name(w.exit_formation)},
              {"looped", w.looped},
              {"bound_exhausted", w.bound_exhausted},
              {"violated_cases", std::move(violated)},
              {"clause", w.clause}};
}

inline Json to_json(const IopWitness& w) {
  Json records = Json::array();
  records.push_back(meta_record(w.trace.meta));
  Json init = world_fields_json(w.trace.initial);
  init["kind"] = "init";
  init["event_index"] = w.trace.initial.event_index;
  records.push_back(std::move(init));
  for (const auto& step : w.trace.steps) records.push_back(trace_record(step.event, step.after));
  return Json{{"kind", "iop-fcom"},  {"program", w.program},   {"instance", to_json(w.instance)},
              {"schedule", to_json(w.schedule)}, {"strategy", w.strategy},
              {"verdict", to_json(w.verdict)},   {"trace", std::move(records)}};
}

// --------------------------------------------------------------------------
// Relation facts

inline Json to_json(const Fact& f) {
  Json j{{"kind", f.kind == Fact::Kind::Dominates ? "dominates" : "separates"},
         {"x", to_string(f.x)},
         {"y", to_string(f.y)},
         {"provenance", f.provenance},
         {"origin", f.origin == Fact::Origin::Axiom      ? "axiom"
                    : f.origin == Fact::Origin::Imported ? "imported"
                                                         : "contribution"}};
  if (f.kind == Fact::Kind::Separates) j["problem"] = f.problem;
  return j;
}

inline Json facts_to_json(const std::vector<Fact>& facts) {
  Json arr = Json::array();
  for (const auto& f : facts) arr.push_back(to_json(f));
  return arr;
}

inline std::vector<Fact> facts_from_json(const Json& arr) {
  std::vector<Fact> facts;
  for (const auto& j : arr) {
    Fact f;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "dominates") {
      f.kind = Fact::Kind::Dominates;
    } else if (kind == "separates") {
      f.kind = Fact::Kind::Separates;
      f.problem = j.at("problem").get<std::string>();
    } else {
      throw std::invalid_argument("unknown fact kind: " + kind);
    }
    f.x = model_sched_from_string(j.at("x").get<std::string>());
    f.y = model_sched_from_string(j.at("y").get<std::string>());
    f.provenance = j.at("provenance").get<std::string>();
    const std::string origin = j.value("origin", "imported");
    f.origin = origin == "axiom"        ? Fact::Origin::Axiom
               : origin == "imported"   ? Fact::Origin::Imported
                                        : Fact::Origin::Contribution;
    facts.push_back(std::move(f));
  }
  return facts;
}

inline Json to_json(const ClaimResult& r) {
  return Json{{"id", r.claim.id},
              {"x", to_string(r.claim.x)},
              {"y", to_string(r.claim.y)},
              {"expected", r.claim.expect == Claim::Expect::MorePowerful ? ">"
                           : r.claim.expect == Claim::Expect::Orthogonal ? "_|_"
                                                                         : "unresolved"},
              {"actual", r.actual},
              {"pass", r.pass},
              {"chain", r.chain}};
}

}  // namespace lcmsim
