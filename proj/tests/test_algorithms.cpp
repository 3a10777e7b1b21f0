#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"
#include "lcmsim/algorithms.hpp"
#include "lcmsim/problems.hpp"
#include "lcmsim/schedule.hpp"
#include "lcmsim/trace.hpp"

using namespace lcmsim;

namespace {

Snapshot look(const WorldState& w, int robot, Model model,
              const RotScale& m = RotScale::identity()) {
  return take_snapshot(w, robot, model, Transform::frame_at(m, w.robot(robot).current_position()));
}

// World-frame outcome of one hypothetical activation under a given frame.
std::pair<std::optional<Color>, Point> world_outcome(const Program& program, const WorldState& w,
                                                     int robot, const RotScale& m) {
  const Point pos = w.robot(robot).current_position();
  const Transform frame = Transform::frame_at(m, pos);
  const ProgramOutput out = program.compute(take_snapshot(w, robot, program.model(), frame));
  return {out.light, apply_transform(inverse(frame), out.destination)};
}

}  // namespace

TEST_CASE("oscillator: the full case table") {
  const OCInstance inst;
  const OscillatorProgram program(inst);

  SECTION("NIL at the center of the first formation moves to the near stop") {
    const WorldState w = inst.initial_world();
    const ProgramOutput out = program.compute(look(w, 3, Model::Fsta));
    CHECK(out.light == Color("RED"));
    CHECK(apply_transform(inverse(Transform::frame_at(RotScale::identity(), inst.center)),
                          out.destination) == inst.near_stop);
  }

  SECTION("NIL in the second formation is a null cycle") {
    const WorldState w = make_world(inst.formation_points(Formation::Second));
    const ProgramOutput out = program.compute(look(w, 3, Model::Fsta));
    CHECK(is_null_cycle(out, kNil));
  }

  SECTION("NIL off-center in the first formation is a null cycle") {
    const WorldState w = inst.initial_world();
    const ProgramOutput out = program.compute(look(w, 0, Model::Fsta));
    CHECK(is_null_cycle(out, kNil));
  }

  SECTION("RED at the near stop advances to the far stop") {
    WorldState w = make_world(inst.formation_points(Formation::Second));
    w.robot(3).light = "RED";
    const auto [light, dest] = world_outcome(program, w, 3, RotScale::identity());
    CHECK(light == Color("BLUE"));
    CHECK(dest == inst.far_stop);
  }

  SECTION("BLUE at the far stop returns to the near stop, keeping BLUE") {
    WorldState w = make_world(inst.formation_points(Formation::Third));
    w.robot(3).light = "BLUE";
    const auto [light, dest] = world_outcome(program, w, 3, RotScale::identity());
    CHECK(light == Color("BLUE"));
    CHECK(dest == inst.near_stop);
  }

  SECTION("BLUE at the near stop returns home and clears to NIL") {
    WorldState w = make_world(inst.formation_points(Formation::Second));
    w.robot(3).light = "BLUE";
    const auto [light, dest] = world_outcome(program, w, 3, RotScale::identity());
    CHECK(light == Color("NIL"));
    CHECK(dest == inst.center);
  }

  SECTION("an FCOM-shaped snapshot is rejected") {
    const WorldState w = inst.initial_world();
    CHECK_THROWS_AS(program.compute(look(w, 3, Model::Fcom)), SnapshotShapeError);
  }
}

TEST_CASE("line former: the full case table") {
  const ILInstance inst;
  const LineFormerProgram program(inst);

  SECTION("no lights, first formation: only the rotator acts") {
    const WorldState w = inst.initial_world();
    const auto [light, dest] = world_outcome(program, w, 0, RotScale::identity());
    CHECK(light == Color("M"));
    CHECK(dest == inst.rotator_target);
    CHECK(is_null_cycle(program.compute(look(w, 1, Model::Fcom)), kNil));
    CHECK(is_null_cycle(program.compute(look(w, 2, Model::Fcom)), kNil));
  }

  SECTION("a visible moving light in the second formation sends the middle robot aside") {
    WorldState w = make_world(inst.formation_points(Formation::Second));
    w.robot(0).light = "M";  // the arrived rotator
    const auto [light, dest] = world_outcome(program, w, 1, RotScale::identity());
    CHECK(light == Color("F"));
    CHECK(dest == inst.pivot_target);
    // The non-middle robot stays put despite seeing the same light.
    CHECK(is_null_cycle(program.compute(look(w, 2, Model::Fcom)), kNil));
  }

  SECTION("any visible final light freezes the observer") {
    WorldState w = make_world(inst.formation_points(Formation::Third));
    w.robot(0).light = "M";
    w.robot(1).light = "F";
    for (int robot : {0, 2})
      CHECK(is_null_cycle(program.compute(look(w, robot, Model::Fcom)), w.robot(robot).light));
    // The mover itself cannot see its own F; it sees M and a non-line shape.
    CHECK(is_null_cycle(program.compute(look(w, 1, Model::Fcom)), Color("F")));
  }

  SECTION("no lights, second formation: nobody acts") {
    const WorldState w = make_world(inst.formation_points(Formation::Second));
    for (int robot : {0, 1, 2})
      CHECK(is_null_cycle(program.compute(look(w, robot, Model::Fcom)), kNil));
  }

  SECTION("an FSTA-shaped snapshot is rejected") {
    CHECK_THROWS_AS(program.compute(look(inst.initial_world(), 0, Model::Fsta)),
                    SnapshotShapeError);
  }
}

TEST_CASE("distance doubler: the full case table") {
  const IOPInstance inst;
  const DistanceDoublerProgram program;
  const WorldState w = inst.initial_world();

  SECTION("a NIL terminal doubles its distance to the middle robot") {
    const auto [light, dest] = world_outcome(program, w, 0, RotScale::identity());
    CHECK(light == Color("RED"));
    CHECK(squared_distance(dest, inst.middle) == 4 * squared_distance(w.robot(0).current_position(), inst.middle));
  }

  SECTION("a RED terminal at doubled distance halves it back") {
    WorldState far = w;
    far.robot(0).phase = IdlePhase{inst.middle - (2 * inst.gap_low) * inst.direction};
    far.robot(0).light = "RED";
    const auto [light, dest] = world_outcome(program, far, 0, RotScale::identity());
    CHECK(light == Color("NIL"));
    CHECK(squared_distance(dest, inst.middle) ==
          squared_distance(far.robot(0).current_position(), inst.middle) / 4);
  }

  SECTION("the middle robot never acts") {
    for (const Color& light : {kNil, Color("RED")}) {
      WorldState mid = w;
      mid.robot(1).light = light;
      CHECK(is_null_cycle(program.compute(look(mid, 1, Model::Fsta)), light));
    }
  }

  SECTION("a non-collinear snapshot is an error") {
    const WorldState bent =
        make_world({make_point(0, 0), make_point(1, 0), make_point(0, 1)});
    CHECK_THROWS_AS(program.compute(look(bent, 0, Model::Fsta)), SnapshotShapeError);
  }
}

TEST_CASE("programs are pure functions of the snapshot") {
  const auto [oc, il, iop] = default_instances();
  const OscillatorProgram oscillator(oc);
  const LineFormerProgram former(il);
  const DistanceDoublerProgram doubler;

  const Snapshot s1 = look(oc.initial_world(), 3, Model::Fsta);
  const Snapshot s2 = look(il.initial_world(), 0, Model::Fcom);
  const Snapshot s3 = look(iop.initial_world(), 0, Model::Fsta);
  for (int i = 0; i < 5; ++i) {
    CHECK(oscillator.compute(s1).destination == oscillator.compute(s1).destination);
    CHECK(oscillator.compute(s1).light == oscillator.compute(s1).light);
    CHECK(former.compute(s2).destination == former.compute(s2).destination);
    CHECK(doubler.compute(s3).destination == doubler.compute(s3).destination);
  }
}

TEST_CASE("world-frame outcomes are invariant under the local frame") {
  const auto [oc, il, iop] = default_instances();
  const OscillatorProgram oscillator(oc);
  const LineFormerProgram former(il);
  const DistanceDoublerProgram doubler;
  std::mt19937_64 rng(2024);

  auto check_invariance = [&](const Program& program, const WorldState& w, int robot) {
    const auto reference = world_outcome(program, w, robot, RotScale::identity());
    for (int i = 0; i < 60; ++i) {
      const RotScale m = testutil::random_multiplier(rng);
      const auto outcome = world_outcome(program, w, robot, m);
      CHECK(outcome.first == reference.first);
      CHECK(outcome.second == reference.second);
    }
  };

  check_invariance(oscillator, oc.initial_world(), 3);
  check_invariance(oscillator, oc.initial_world(), 1);
  WorldState second = make_world(oc.formation_points(Formation::Second));
  second.robot(3).light = "RED";
  check_invariance(oscillator, second, 3);

  check_invariance(former, il.initial_world(), 0);
  WorldState line = make_world(il.formation_points(Formation::Second));
  line.robot(0).light = "M";
  check_invariance(former, line, 1);
  check_invariance(former, line, 2);

  check_invariance(doubler, iop.initial_world(), 0);
  check_invariance(doubler, iop.initial_world(), 2);
}

TEST_CASE("only the center robot ever has a non-null cycle") {
  const OCInstance inst;
  const OscillatorProgram program(inst);
  AdversaryParams params;
  params.seed = 123;
  params.horizon = 400;
  params.fairness_window = 40;
  params.max_progress_splits = 3;
  const Trace trace =
      run(inst.initial_world(), program, Model::Fsta, generate_async(params, 4));

  trace.for_each_state([&](const WorldState& w) {
    for (int id : {0, 1, 2}) {
      CHECK(w.robot(id).current_position() == inst.triangle[id]);
      CHECK(w.robot(id).light == kNil);
    }
  });
}

TEST_CASE("the oblivious corpus is big enough and deterministic") {
  const OCInstance inst;
  const auto corpus = oblivious_candidates(inst);
  CHECK(corpus.size() >= 5);

  const WorldState second = make_world(inst.formation_points(Formation::Second));
  for (const auto& program : corpus) {
    CHECK(program->model() == Model::Oblot);
    for (const auto& robot : second.robots) {
      const Snapshot snap = look(second, robot.id, Model::Oblot);
      const ProgramOutput a = program->compute(snap);
      const ProgramOutput b = program->compute(snap);
      CHECK(a.destination == b.destination);
      CHECK(a.light == b.light);
    }
  }

  // The lightless mimic commits to one fixed move from the second formation,
  // whatever history produced it.
  const LightlessOscillatorProgram mimic(inst);
  const WorldState from_first = make_world(inst.formation_points(Formation::Second));
  const WorldState from_third = make_world(inst.formation_points(Formation::Second));
  const ProgramOutput a = mimic.compute(look(from_first, 3, Model::Oblot));
  const ProgramOutput b = mimic.compute(look(from_third, 3, Model::Oblot));
  CHECK(a.destination == b.destination);

  const AlwaysNullProgram null_program;
  for (const auto& robot : second.robots)
    CHECK(is_null_cycle(null_program.compute(look(second, robot.id, Model::Oblot)), kNil));
}
