#pragma once

// Shared test utilities: seeded random rational geometry and trace
// transformations used by the property suites.

#include <random>
#include <vector>

#include "lcmsim/engine.hpp"
#include "lcmsim/geometry.hpp"
#include "lcmsim/problems.hpp"
#include "lcmsim/rational.hpp"
#include "lcmsim/trace.hpp"

namespace testutil {

using namespace lcmsim;

inline Scalar random_scalar(std::mt19937_64& rng, int span = 8, int max_den = 4) {
  const std::int64_t num = static_cast<std::int64_t>(rng() % (2 * span + 1)) - span;
  const std::int64_t den = 1 + static_cast<std::int64_t>(rng() % max_den);
  return make_scalar(num, den);
}

inline Point random_point(std::mt19937_64& rng, int span = 8) {
  return {random_scalar(rng, span), random_scalar(rng, span)};
}

inline RotScale random_multiplier(std::mt19937_64& rng, int span = 4) {
  for (;;) {
    RotScale m{random_scalar(rng, span), random_scalar(rng, span)};
    if (!m.is_zero()) return m;
  }
}

inline Transform random_transform(std::mt19937_64& rng) {
  return {random_multiplier(rng), random_point(rng)};
}

inline std::vector<Point> random_distinct_points(std::mt19937_64& rng, std::size_t n,
                                                 int span = 8) {
  std::vector<Point> out;
  while (out.size() < n) {
    Point p = random_point(rng, span);
    bool fresh = true;
    for (const auto& q : out)
      if (q == p) fresh = false;
    if (fresh) out.push_back(std::move(p));
  }
  return out;
}

inline Point transform_point(const Transform& t, const Point& p) { return apply_transform(t, p); }

inline Phase transform_phase(const Transform& t, const Phase& phase) {
  if (const auto* idle = std::get_if<IdlePhase>(&phase))
    return IdlePhase{apply_transform(t, idle->position)};
  if (const auto* pending = std::get_if<PendingComputePhase>(&phase))
    return PendingComputePhase{apply_transform(t, pending->position), pending->pending_light,
                               apply_transform(t, pending->pending_destination)};
  const auto& moving = std::get<MovingPhase>(phase);
  return MovingPhase{apply_transform(t, moving.start), apply_transform(t, moving.destination),
                     moving.progress};
}

inline WorldState transform_world(const Transform& t, const WorldState& w) {
  WorldState out = w;
  for (auto& r : out.robots) r.phase = transform_phase(t, r.phase);
  return out;
}

/// Applies one global similarity to every state of a trace.
inline Trace transform_trace(const Transform& t, const Trace& trace) {
  Trace out = trace;
  out.initial = transform_world(t, trace.initial);
  for (auto& step : out.steps) step.after = transform_world(t, step.after);
  return out;
}

inline OCInstance transform_instance(const Transform& t, const OCInstance& inst) {
  OCInstance out;
  for (std::size_t i = 0; i < 3; ++i) out.triangle[i] = apply_transform(t, inst.triangle[i]);
  out.center = apply_transform(t, inst.center);
  out.near_stop = apply_transform(t, inst.near_stop);
  out.far_stop = apply_transform(t, inst.far_stop);
  return out;
}

}  // namespace testutil
