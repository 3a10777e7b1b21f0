#pragma once

// FSYNC / SSYNC / ASYNC schedules: seeded adversary generators, a validator
// for the phase-legality / cycle-completion / bounded-fairness contract, and
// the SSYNC-to-ASYNC converter.
//
// "Activated infinitely often" is operationalized as bounded fairness: every
// robot starts a cycle at least once in every window of `fairness_window`
// consecutive events (ASYNC) or rounds (SSYNC/FSYNC).

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcmsim/engine.hpp"
#include "lcmsim/geometry.hpp"

namespace lcmsim {

enum class SchedulerKind { Fsync, Ssync, Async };

inline std::string scheduler_name(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::Fsync: return "FSYNC";
    case SchedulerKind::Ssync: return "SSYNC";
    case SchedulerKind::Async: return "ASYNC";
  }
  throw std::logic_error("bad scheduler kind");
}

inline SchedulerKind scheduler_from_name(const std::string& s) {
  if (s == "FSYNC") return SchedulerKind::Fsync;
  if (s == "SSYNC") return SchedulerKind::Ssync;
  if (s == "ASYNC") return SchedulerKind::Async;
  throw std::invalid_argument("unknown scheduler: " + s);
}

enum class FramePolicy { FixedPerRobot, FreshPerActivation };

struct AsyncEvent {
  enum class Kind { Activate, FinishCompute, Progress };
  Kind kind = Kind::Activate;
  int robot = 0;
  Scalar delta{};                          // Progress only; fraction of the whole move
  RotScale frame = RotScale::identity();   // Activate only; local frame multiplier
};

struct Round {
  std::vector<int> active;
  std::vector<std::pair<int, RotScale>> frames;  // per active robot
};

struct Schedule {
  SchedulerKind kind = SchedulerKind::Async;
  int robot_count = 0;
  std::size_t fairness_window = 0;
  std::vector<AsyncEvent> events;  // ASYNC
  std::vector<Round> rounds;       // FSYNC / SSYNC

  std::size_t length() const {
    return kind == SchedulerKind::Async ? events.size() : rounds.size();
  }
};

struct AdversaryParams {
  std::uint64_t seed = 0;
  std::size_t horizon = 0;          // max events (ASYNC) or rounds (sync)
  std::size_t fairness_window = 0;  // W
  int max_progress_splits = 1;      // how many Progress events one move may be cut into
  FramePolicy frame_policy = FramePolicy::FreshPerActivation;
};

struct ScheduleViolation {
  std::size_t index = 0;  // event or round index
  std::string rule;
  std::string detail;
};

namespace detail {

inline std::uint64_t uniform(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;  // tiny bias is irrelevant here; keeps output portable
}

inline RotScale random_multiplier(std::mt19937_64& rng) {
  for (;;) {
    const std::int64_t num_re = static_cast<std::int64_t>(uniform(rng, 9)) - 4;
    const std::int64_t num_im = static_cast<std::int64_t>(uniform(rng, 9)) - 4;
    if (num_re == 0 && num_im == 0) continue;
    const std::int64_t den = 1 + static_cast<std::int64_t>(uniform(rng, 4));
    return make_rotscale(num_re, den, num_im, den);
  }
}

inline std::vector<Scalar> random_split(std::mt19937_64& rng, int parts) {
  std::vector<std::int64_t> weights(parts);
  std::int64_t total = 0;
  for (auto& w : weights) {
    w = 1 + static_cast<std::int64_t>(uniform(rng, 6));
    total += w;
  }
  std::vector<Scalar> deltas;
  deltas.reserve(parts);
  for (auto w : weights) deltas.push_back(make_scalar(w, total));
  return deltas;
}

inline void check_params(const AdversaryParams& p, int robot_count) {
  if (robot_count <= 0) throw std::invalid_argument("robot_count must be positive");
  if (p.fairness_window < static_cast<std::size_t>(robot_count))
    throw std::invalid_argument("fairness window smaller than the team");
  if (p.horizon < p.fairness_window)
    throw std::invalid_argument("horizon shorter than the fairness window");
  if (p.max_progress_splits < 1)
    throw std::invalid_argument("max_progress_splits must be at least 1");
}

}  // namespace detail

/// Seeded ASYNC adversary. Emits blocks in which every robot runs exactly one
/// full cycle (Activate, FinishCompute, Progress x k with deltas summing to
/// 1); block-internal order is a random interleaving when the fairness window
/// allows it, a fixed round-robin otherwise. Deterministic in the seed.
inline Schedule generate_async(const AdversaryParams& params, int robot_count) {
  detail::check_params(params, robot_count);
  const std::size_t r = static_cast<std::size_t>(robot_count);
  const std::size_t w = params.fairness_window;

  // An interleaved block of cycles with up to s progress splits keeps every
  // activation gap under 2*r*(2+s); round-robin needs exactly 3*r.
  int splits = 1;
  bool interleave = false;
  if (w >= 6 * r) {
    interleave = true;
    splits = std::min<std::size_t>(params.max_progress_splits, w / (2 * r) - 2);
  } else if (w < 3 * r) {
    throw std::invalid_argument("fairness window too small for asynchronous cycles");
  }

  std::mt19937_64 rng(params.seed);
  Schedule sched;
  sched.kind = SchedulerKind::Async;
  sched.robot_count = robot_count;
  sched.fairness_window = w;

  std::vector<RotScale> fixed_frames;
  if (params.frame_policy == FramePolicy::FixedPerRobot)
    for (std::size_t i = 0; i < r; ++i) fixed_frames.push_back(detail::random_multiplier(rng));

  auto frame_for = [&](int robot) {
    return params.frame_policy == FramePolicy::FixedPerRobot ? fixed_frames[robot]
                                                             : detail::random_multiplier(rng);
  };

  for (;;) {
    std::vector<std::vector<AsyncEvent>> cycles(r);
    for (std::size_t i = 0; i < r; ++i) {
      const int robot = static_cast<int>(i);
      cycles[i].push_back({AsyncEvent::Kind::Activate, robot, Scalar{}, frame_for(robot)});
      cycles[i].push_back({AsyncEvent::Kind::FinishCompute, robot, Scalar{}, {}});
      const int parts =
          interleave ? 1 + static_cast<int>(detail::uniform(rng, static_cast<std::uint64_t>(splits))) : 1;
      for (const auto& d : detail::random_split(rng, parts))
        cycles[i].push_back({AsyncEvent::Kind::Progress, robot, d, {}});
    }

    std::vector<AsyncEvent> block;
    if (interleave) {
      std::vector<std::size_t> cursor(r, 0);
      std::size_t remaining = 0;
      for (const auto& c : cycles) remaining += c.size();
      while (remaining > 0) {
        // pick uniformly among remaining events so long cycles interleave more
        std::uint64_t pick = detail::uniform(rng, remaining);
        for (std::size_t i = 0; i < r; ++i) {
          const std::size_t left = cycles[i].size() - cursor[i];
          if (pick < left) {
            block.push_back(cycles[i][cursor[i]++]);
            break;
          }
          pick -= left;
        }
        --remaining;
      }
    } else {
      for (const auto& c : cycles) block.insert(block.end(), c.begin(), c.end());
    }

    if (sched.events.size() + block.size() > params.horizon) break;
    sched.events.insert(sched.events.end(), block.begin(), block.end());
    if (block.empty()) break;
  }
  return sched;
}

/// Seeded SSYNC adversary: a random nonempty activation subset per round,
/// with robots force-included when their fairness deadline approaches.
/// `force_full` yields FSYNC (every robot in every round).
inline Schedule generate_ssync(const AdversaryParams& params, int robot_count,
                               bool force_full = false) {
  detail::check_params(params, robot_count);
  std::mt19937_64 rng(params.seed);

  Schedule sched;
  sched.kind = force_full ? SchedulerKind::Fsync : SchedulerKind::Ssync;
  sched.robot_count = robot_count;
  sched.fairness_window = params.fairness_window;

  std::vector<RotScale> fixed_frames;
  if (params.frame_policy == FramePolicy::FixedPerRobot)
    for (int i = 0; i < robot_count; ++i) fixed_frames.push_back(detail::random_multiplier(rng));

  std::vector<std::size_t> since_active(robot_count, 0);
  for (std::size_t t = 0; t < params.horizon; ++t) {
    Round round;
    for (int i = 0; i < robot_count; ++i) {
      const bool forced = force_full || since_active[i] + 1 >= params.fairness_window;
      if (forced || detail::uniform(rng, 2) == 0) round.active.push_back(i);
    }
    if (round.active.empty())
      round.active.push_back(static_cast<int>(detail::uniform(rng, robot_count)));

    for (int id : round.active) {
      const RotScale m = params.frame_policy == FramePolicy::FixedPerRobot
                             ? fixed_frames[id]
                             : detail::random_multiplier(rng);
      round.frames.emplace_back(id, m);
    }
    for (int i = 0; i < robot_count; ++i) ++since_active[i];
    for (int id : round.active) since_active[id] = 0;
    sched.rounds.push_back(std::move(round));
  }
  return sched;
}

inline Schedule generate_fsync(const AdversaryParams& params, int robot_count) {
  return generate_ssync(params, robot_count, /*force_full=*/true);
}

/// Checks phase-legality, cycle completion and bounded fairness. An empty
/// result means the schedule is valid; violations are data, not errors.
inline std::vector<ScheduleViolation> validate_schedule(const Schedule& sched, int robot_count) {
  std::vector<ScheduleViolation> out;
  if (sched.robot_count != robot_count)
    out.push_back({0, "robot-count", "schedule declares " + std::to_string(sched.robot_count) +
                                         " robots, expected " + std::to_string(robot_count)});

  const std::size_t w = sched.fairness_window;
  std::vector<std::vector<std::size_t>> activations(robot_count);

  if (sched.kind == SchedulerKind::Async) {
    enum class St { Idle, Looked, Moving };
    std::vector<St> state(robot_count, St::Idle);
    std::vector<Scalar> progressed(robot_count, Scalar(0));
    std::vector<std::size_t> cycle_start(robot_count, 0);

    for (std::size_t i = 0; i < sched.events.size(); ++i) {
      const auto& ev = sched.events[i];
      if (ev.robot < 0 || ev.robot >= robot_count) {
        out.push_back({i, "phase-legality", "event names unknown robot " + std::to_string(ev.robot)});
        continue;
      }
      auto& st = state[ev.robot];
      switch (ev.kind) {
        case AsyncEvent::Kind::Activate:
          if (st != St::Idle) {
            out.push_back({i, "phase-legality",
                           "activate while robot " + std::to_string(ev.robot) + " is mid-cycle"});
          } else {
            if (ev.frame.is_zero())
              out.push_back({i, "frame", "zero frame multiplier"});
            st = St::Looked;
            cycle_start[ev.robot] = i;
            activations[ev.robot].push_back(i);
          }
          break;
        case AsyncEvent::Kind::FinishCompute:
          if (st != St::Looked) {
            out.push_back({i, "phase-legality",
                           "finish_compute without a pending look for robot " +
                               std::to_string(ev.robot)});
          } else {
            st = St::Moving;
            progressed[ev.robot] = 0;
          }
          break;
        case AsyncEvent::Kind::Progress:
          if (st != St::Moving) {
            out.push_back({i, "phase-legality",
                           "progress outside a move for robot " + std::to_string(ev.robot)});
          } else if (ev.delta <= 0 || progressed[ev.robot] + ev.delta > 1) {
            out.push_back({i, "rigidity", "progress delta out of range"});
          } else {
            progressed[ev.robot] += ev.delta;
            if (progressed[ev.robot] == 1) st = St::Idle;
          }
          break;
      }
    }
    for (int rb = 0; rb < robot_count; ++rb)
      if (state[rb] != St::Idle)
        out.push_back({cycle_start[rb], "cycle-completion",
                       "robot " + std::to_string(rb) + " never completes its last cycle"});
  } else {
    for (std::size_t t = 0; t < sched.rounds.size(); ++t) {
      const auto& round = sched.rounds[t];
      if (round.active.empty()) out.push_back({t, "round", "empty activation set"});
      std::vector<bool> seen(robot_count, false);
      for (int id : round.active) {
        if (id < 0 || id >= robot_count) {
          out.push_back({t, "round", "unknown robot " + std::to_string(id)});
          continue;
        }
        if (seen[id]) out.push_back({t, "round", "robot " + std::to_string(id) + " listed twice"});
        seen[id] = true;
        activations[id].push_back(t);
      }
      if (sched.kind == SchedulerKind::Fsync &&
          round.active.size() != static_cast<std::size_t>(robot_count))
        out.push_back({t, "fsync", "round does not activate the full team"});
      for (const auto& [id, m] : round.frames)
        if (m.is_zero()) out.push_back({t, "frame", "zero frame multiplier"});
    }
  }

  // Bounded fairness: every length-w window fully inside the schedule must
  // contain an activation of every robot.
  const std::size_t len = sched.length();
  if (w == 0) {
    out.push_back({0, "fairness", "fairness window is zero"});
  } else if (len >= w) {
    for (int rb = 0; rb < robot_count; ++rb) {
      const auto& acts = activations[rb];
      std::size_t prev_end = 0;  // exclusive end of the last covered prefix
      for (std::size_t a : acts) {
        if (a >= prev_end + w) {
          out.push_back({prev_end, "fairness",
                         "robot " + std::to_string(rb) + " starts no cycle in window [" +
                             std::to_string(prev_end) + ", " + std::to_string(prev_end + w) + ")"});
        }
        prev_end = std::max(prev_end, a + 1);
      }
      if (prev_end + w <= len)
        out.push_back({prev_end, "fairness",
                       "robot " + std::to_string(rb) + " starts no cycle in window [" +
                           std::to_string(prev_end) + ", " + std::to_string(prev_end + w) + ")"});
    }
  }
  return out;
}

/// Expresses an FSYNC/SSYNC schedule as an ASYNC one: per round, all Looks,
/// then all compute completions, then all full moves, with no interleaving.
/// Runs produce the same idle-configuration sequence either way.
inline Schedule to_async(const Schedule& sync) {
  if (sync.kind == SchedulerKind::Async) return sync;
  Schedule out;
  out.kind = SchedulerKind::Async;
  out.robot_count = sync.robot_count;
  const std::size_t per_round = 3 * static_cast<std::size_t>(sync.robot_count);
  out.fairness_window = per_round * (sync.fairness_window + 1);

  for (const auto& round : sync.rounds) {
    auto frame_of = [&](int id) {
      for (const auto& [rid, m] : round.frames)
        if (rid == id) return m;
      return RotScale::identity();
    };
    for (int id : round.active)
      out.events.push_back({AsyncEvent::Kind::Activate, id, Scalar{}, frame_of(id)});
    for (int id : round.active)
      out.events.push_back({AsyncEvent::Kind::FinishCompute, id, Scalar{}, {}});
    for (int id : round.active)
      out.events.push_back({AsyncEvent::Kind::Progress, id, Scalar(1), {}});
  }
  return out;
}

}  // namespace lcmsim
