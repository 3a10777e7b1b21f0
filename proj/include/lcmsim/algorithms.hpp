#pragma once

// The shipped robot programs:
//   - oscillator (FSTA): drives the four-robot formation oscillation.
//   - line_former (FCOM): two-stage line formation via external lights.
//   - distance_doubler (FSTA): independent terminal oscillation on a line.
// plus a corpus of deterministic OBLOT programs for the indistinguishability
// harness and a lightless FCOM mimic for the adversarial search.
//
// Every program resolves geometry in its own snapshot frame by whole-set
// similarity matching against instance templates, so outputs are invariant
// under the adversary's choice of local frames.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcmsim/engine.hpp"
#include "lcmsim/geometry.hpp"
#include "lcmsim/problems.hpp"

namespace lcmsim {

inline const Color kRed = "RED";
inline const Color kBlue = "BLUE";
inline const Color kMoving = "M";
inline const Color kFinal = "F";

namespace detail {

inline void require_shape(const Snapshot& snap, Model expected, std::size_t others) {
  if (snap.model != expected)
    throw SnapshotShapeError("snapshot has " + model_name(snap.model) + " shape, expected " +
                             model_name(expected));
  if (snap.others.size() != others)
    throw SnapshotShapeError("snapshot shows " + std::to_string(snap.others.size()) +
                             " other robots, expected " + std::to_string(others));
  const bool own = own_light_visible(expected);
  if (snap.own_light.has_value() != own)
    throw SnapshotShapeError("own-light field does not match the model");
  for (const auto& o : snap.others)
    if (o.light.has_value() != others_lights_visible(expected))
      throw SnapshotShapeError("others' light fields do not match the model");
}

// Matches an instance template onto the snapshot's point set. On success
// reports the template slot the observer occupies and the template->snapshot
// transform (which also places template points that are not part of the
// formation, e.g. a movement target).
struct TemplateFit {
  std::size_t self_slot;
  Transform to_snapshot;
};

inline std::optional<TemplateFit> fit_template(const std::vector<Point>& tmpl,
                                               const std::vector<Point>& snapshot_points) {
  auto c = match_with_correspondence(tmpl, snapshot_points);
  if (!c) return std::nullopt;
  for (std::size_t slot = 0; slot < c->image.size(); ++slot)
    if (c->image[slot] == 0) return TemplateFit{slot, c->map};  // self is point 0
  return std::nullopt;
}

inline ProgramOutput null_cycle() { return ProgramOutput{std::nullopt, Point{}}; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Oscillator: the only robot that ever moves is the one starting at the
// equidistant center; its internal light tracks where it is headed.

class OscillatorProgram final : public Program {
 public:
  explicit OscillatorProgram(OCInstance instance) : instance_(std::move(instance)) {}

  std::string name() const override { return "alg_oc"; }
  Model model() const override { return Model::Fsta; }
  const std::vector<Color>& palette() const override {
    static const std::vector<Color> colors = {kNil, kRed, kBlue};
    return colors;
  }

  ProgramOutput compute(const Snapshot& snap) const override {
    detail::require_shape(snap, Model::Fsta, 3);
    const auto points = snap.all_points();
    const Color& light = *snap.own_light;

    if (light == kNil) {
      const auto fit = detail::fit_template(instance_.formation_points(Formation::First), points);
      if (fit && fit->self_slot == 3)  // at the center of the first formation
        return {kRed, apply_transform(fit->to_snapshot, instance_.near_stop)};
      return detail::null_cycle();
    }
    if (light == kRed) {
      const auto fit = detail::fit_template(instance_.formation_points(Formation::Second), points);
      if (fit && fit->self_slot == 3)
        return {kBlue, apply_transform(fit->to_snapshot, instance_.far_stop)};
      return detail::null_cycle();
    }
    if (light == kBlue) {
      const auto far = detail::fit_template(instance_.formation_points(Formation::Third), points);
      if (far && far->self_slot == 3)
        return {kBlue, apply_transform(far->to_snapshot, instance_.near_stop)};
      const auto near = detail::fit_template(instance_.formation_points(Formation::Second), points);
      if (near && near->self_slot == 3)
        return {kNil, apply_transform(near->to_snapshot, instance_.center)};
      return detail::null_cycle();
    }
    return detail::null_cycle();
  }

 private:
  OCInstance instance_;
};

// ---------------------------------------------------------------------------
// Line former: external lights gate the two stages. A robot that sees the
// final-stage color freezes; one that sees the moving color steps aside only
// from the middle of the line; with no lights, only the rotator may act.

class LineFormerProgram final : public Program {
 public:
  explicit LineFormerProgram(ILInstance instance) : instance_(std::move(instance)) {}

  std::string name() const override { return "comil"; }
  Model model() const override { return Model::Fcom; }
  const std::vector<Color>& palette() const override {
    static const std::vector<Color> colors = {kNil, kMoving, kFinal};
    return colors;
  }

  ProgramOutput compute(const Snapshot& snap) const override {
    detail::require_shape(snap, Model::Fcom, 2);
    const auto points = snap.all_points();

    bool sees_moving = false;
    for (const auto& o : snap.others) {
      if (*o.light == kFinal) return detail::null_cycle();
      if (*o.light == kMoving) sees_moving = true;
    }

    if (sees_moving) {
      const auto fit = detail::fit_template(instance_.formation_points(Formation::Second), points);
      if (!fit) return detail::null_cycle();
      if (!strictly_between(Point{}, snap.others[0].position, snap.others[1].position))
        return detail::null_cycle();
      return {kFinal, apply_transform(fit->to_snapshot, instance_.pivot_target)};
    }

    // No lights at all: act only from the start formation, in the rotator role.
    if (detail::fit_template(instance_.formation_points(Formation::Second), points))
      return detail::null_cycle();
    const auto fit = detail::fit_template(instance_.formation_points(Formation::First), points);
    if (fit && fit->self_slot == 0)  // templates list the rotator first
      return {kMoving, apply_transform(fit->to_snapshot, instance_.rotator_target)};
    return detail::null_cycle();
  }

 private:
  ILInstance instance_;
};

// ---------------------------------------------------------------------------
// Distance doubler: a terminal robot alternates between moving away by its
// current distance to the middle robot and moving halfway back.

class DistanceDoublerProgram final : public Program {
 public:
  std::string name() const override { return "algo_iop"; }
  Model model() const override { return Model::Fsta; }
  const std::vector<Color>& palette() const override {
    static const std::vector<Color> colors = {kNil, kRed};
    return colors;
  }

  ProgramOutput compute(const Snapshot& snap) const override {
    detail::require_shape(snap, Model::Fsta, 2);
    const Point origin{};
    const Point p = snap.others[0].position;
    const Point q = snap.others[1].position;
    if (cross(p, q) != 0)
      throw SnapshotShapeError("distance doubler requires a collinear snapshot");
    if (strictly_between(origin, p, q)) return detail::null_cycle();  // self is the middle

    const Point middle = strictly_between(p, origin, q) ? p : q;
    if (*snap.own_light == kNil)
      return {kRed, Point{} - middle};  // away: distance doubles
    return {kNil, make_scalar(1, 2) * middle};  // back: distance halves
  }
};

// ---------------------------------------------------------------------------
// OBLOT corpus for the indistinguishability harness. All are deterministic
// pure functions of a lightless four-robot snapshot.

class AlwaysNullProgram final : public Program {
 public:
  std::string name() const override { return "always_null"; }
  Model model() const override { return Model::Oblot; }
  const std::vector<Color>& palette() const override {
    static const std::vector<Color> colors = {kNil};
    return colors;
  }
  ProgramOutput compute(const Snapshot& snap) const override {
    detail::require_shape(snap, Model::Oblot, snap.others.size());
    return detail::null_cycle();
  }
};

// Replays the oscillator's movements with no memory: from the second
// formation it always advances toward the third.
class LightlessOscillatorProgram final : public Program {
 public:
  explicit LightlessOscillatorProgram(OCInstance instance) : instance_(std::move(instance)) {}

  std::string name() const override { return "mimic_alg_oc"; }
  Model model() const override { return Model::Oblot; }
  const std::vector<Color>& palette() const override {
    static const std::vector<Color> colors = {kNil};
    return colors;
  }

  ProgramOutput compute(const Snapshot& snap) const override {
    detail::require_shape(snap, Model::Oblot, 3);
    const auto points = snap.all_points();
    if (auto fit = detail::fit_template(instance_.formation_points(Formation::First), points);
        fit && fit->self_slot == 3)
      return {std::nullopt, apply_transform(fit->to_snapshot, instance_.near_stop)};
    if (auto fit = detail::fit_template(instance_.formation_points(Formation::Second), points);
        fit && fit->self_slot == 3)
      return {std::nullopt, apply_transform(fit->to_snapshot, instance_.far_stop)};
    if (auto fit = detail::fit_template(instance_.formation_points(Formation::Third), points);
        fit && fit->self_slot == 3)
      return {std::nullopt, apply_transform(fit->to_snapshot, instance_.near_stop)};
    return detail::null_cycle();
  }

 private:
  OCInstance instance_;
};

// As above but from the second formation it always retreats toward the first.
class LightlessRetreaterProgram final : public Program {
 public:
  explicit LightlessRetreaterProgram(OCInstance instance) : instance_(std::move(instance)) {}

  std::string name() const override { return "retreat_mimic"; }
  Model model() const override { return Model::Oblot; }
  const std::vector<Color>& palette() const override {
    static const std::vector<Color> colors = {kNil};
    return colors;
  }

  ProgramOutput compute(const Snapshot& snap) const override {
    detail::require_shape(snap, Model::Oblot, 3);
    const auto points = snap.all_points();
    if (auto fit = detail::fit_template(instance_.formation_points(Formation::Second), points);
        fit && fit->self_slot == 3)
      return {std::nullopt, apply_transform(fit->to_snapshot, instance_.center)};
    if (auto fit = detail::fit_template(instance_.formation_points(Formation::Third), points);
        fit && fit->self_slot == 3)
      return {std::nullopt, apply_transform(fit->to_snapshot, instance_.near_stop)};
    return detail::null_cycle();
  }

 private:
  OCInstance instance_;
};

class MoveToCentroidProgram final : public Program {
 public:
  std::string name() const override { return "move_to_centroid"; }
  Model model() const override { return Model::Oblot; }
  const std::vector<Color>& palette() const override {
    static const std::vector<Color> colors = {kNil};
    return colors;
  }

  ProgramOutput compute(const Snapshot& snap) const override {
    detail::require_shape(snap, Model::Oblot, snap.others.size());
    Point sum{};
    for (const auto& o : snap.others) sum = sum + o.position;
    const Scalar n(static_cast<int>(snap.others.size()) + 1);
    return {std::nullopt, checked_div(Scalar(1), n) * sum};
  }
};

class SpreadFromCentroidProgram final : public Program {
 public:
  std::string name() const override { return "spread_from_centroid"; }
  Model model() const override { return Model::Oblot; }
  const std::vector<Color>& palette() const override {
    static const std::vector<Color> colors = {kNil};
    return colors;
  }

  ProgramOutput compute(const Snapshot& snap) const override {
    detail::require_shape(snap, Model::Oblot, snap.others.size());
    Point sum{};
    for (const auto& o : snap.others) sum = sum + o.position;
    const Scalar n(static_cast<int>(snap.others.size()) + 1);
    const Point centroid = checked_div(Scalar(1), n) * sum;
    return {std::nullopt, Point{} - centroid};
  }
};

class WalkToNearestProgram final : public Program {
 public:
  std::string name() const override { return "walk_to_nearest"; }
  Model model() const override { return Model::Oblot; }
  const std::vector<Color>& palette() const override {
    static const std::vector<Color> colors = {kNil};
    return colors;
  }

  ProgramOutput compute(const Snapshot& snap) const override {
    detail::require_shape(snap, Model::Oblot, snap.others.size());
    if (snap.others.empty()) return detail::null_cycle();
    const Point origin{};
    const Point* nearest = &snap.others[0].position;
    Scalar best = squared_distance(origin, *nearest);
    for (const auto& o : snap.others) {
      const Scalar d = squared_distance(origin, o.position);
      if (d < best || (d == best && o.position < *nearest)) {
        best = d;
        nearest = &o.position;
      }
    }
    return {std::nullopt, make_scalar(1, 2) * *nearest};  // midpoint toward it
  }
};

/// Deterministic OBLOT programs over four-robot snapshots, used as fodder for
/// the indistinguishability harness.
inline std::vector<std::unique_ptr<Program>> oblivious_candidates(const OCInstance& instance) {
  std::vector<std::unique_ptr<Program>> out;
  out.push_back(std::make_unique<AlwaysNullProgram>());
  out.push_back(std::make_unique<LightlessOscillatorProgram>(instance));
  out.push_back(std::make_unique<LightlessRetreaterProgram>(instance));
  out.push_back(std::make_unique<MoveToCentroidProgram>());
  out.push_back(std::make_unique<SpreadFromCentroidProgram>());
  out.push_back(std::make_unique<WalkToNearestProgram>());
  return out;
}

// ---------------------------------------------------------------------------
// Lightless FCOM mimic of the distance doubler: it repeats the move-away rule
// regardless of any light, which the adversarial search punishes.

class MoveAwayMimicProgram final : public Program {
 public:
  std::string name() const override { return "move_away_mimic"; }
  Model model() const override { return Model::Fcom; }
  const std::vector<Color>& palette() const override {
    static const std::vector<Color> colors = {kNil, kRed};
    return colors;
  }

  ProgramOutput compute(const Snapshot& snap) const override {
    detail::require_shape(snap, Model::Fcom, 2);
    const Point origin{};
    const Point p = snap.others[0].position;
    const Point q = snap.others[1].position;
    if (cross(p, q) != 0)
      throw SnapshotShapeError("move-away mimic requires a collinear snapshot");
    if (strictly_between(origin, p, q)) return detail::null_cycle();
    const Point middle = strictly_between(p, origin, q) ? p : q;
    return {std::nullopt, Point{} - middle};
  }
};

class FcomAlwaysNullProgram final : public Program {
 public:
  std::string name() const override { return "fcom_always_null"; }
  Model model() const override { return Model::Fcom; }
  const std::vector<Color>& palette() const override {
    static const std::vector<Color> colors = {kNil};
    return colors;
  }
  ProgramOutput compute(const Snapshot& snap) const override {
    detail::require_shape(snap, Model::Fcom, snap.others.size());
    return detail::null_cycle();
  }
};

// ---------------------------------------------------------------------------
// Registry

inline std::vector<std::string> registered_programs() {
  return {"alg_oc",           "comil",
          "algo_iop",         "always_null",
          "mimic_alg_oc",     "retreat_mimic",
          "move_to_centroid", "spread_from_centroid",
          "walk_to_nearest",  "move_away_mimic",
          "fcom_always_null"};
}

inline std::unique_ptr<Program> make_program(const std::string& name, const OCInstance& oc,
                                             const ILInstance& il) {
  if (name == "alg_oc") return std::make_unique<OscillatorProgram>(oc);
  if (name == "comil") return std::make_unique<LineFormerProgram>(il);
  if (name == "algo_iop") return std::make_unique<DistanceDoublerProgram>();
  if (name == "always_null") return std::make_unique<AlwaysNullProgram>();
  if (name == "mimic_alg_oc") return std::make_unique<LightlessOscillatorProgram>(oc);
  if (name == "retreat_mimic") return std::make_unique<LightlessRetreaterProgram>(oc);
  if (name == "move_to_centroid") return std::make_unique<MoveToCentroidProgram>();
  if (name == "spread_from_centroid") return std::make_unique<SpreadFromCentroidProgram>();
  if (name == "walk_to_nearest") return std::make_unique<WalkToNearestProgram>();
  if (name == "move_away_mimic") return std::make_unique<MoveAwayMimicProgram>();
  if (name == "fcom_always_null") return std::make_unique<FcomAlwaysNullProgram>();
  throw std::invalid_argument("unknown program: " + name);
}

inline std::unique_ptr<Program> make_program(const std::string& name) {
  return make_program(name, OCInstance{}, ILInstance{});
}

}  // namespace lcmsim
