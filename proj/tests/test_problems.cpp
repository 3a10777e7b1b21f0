#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"
#include "lcmsim/algorithms.hpp"
#include "lcmsim/problems.hpp"
#include "lcmsim/schedule.hpp"
#include "lcmsim/trace.hpp"

using namespace lcmsim;

namespace {

// A synthetic trace of all-idle worlds, one per listed position set.
Trace idle_trace(const std::vector<std::vector<Point>>& stages) {
  Trace trace;
  trace.initial = make_world(stages.front());
  for (std::size_t i = 1; i < stages.size(); ++i) {
    TraceStep step;
    step.event.kind = EventDescriptor::Kind::Round;
    step.after = make_world(stages[i]);
    step.after.event_index = i;
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

Schedule async_schedule(std::uint64_t seed, std::size_t horizon, std::size_t window,
                        int robots) {
  AdversaryParams p;
  p.seed = seed;
  p.horizon = horizon;
  p.fairness_window = window;
  p.max_progress_splits = 3;
  return generate_async(p, robots);
}

}  // namespace

TEST_CASE("default instances satisfy their invariants") {
  const auto [oc, il, iop] = default_instances();

  const auto first = oc.formation_points(Formation::First);
  CHECK(equidistant_index(first) == std::size_t{3});
  CHECK(rotate90_cw(il.rotator, il.pivot) == il.rotator_target);
  CHECK(strictly_between(iop.middle, iop.terminal_low(), iop.terminal_high()));
}

TEST_CASE("broken instances are rejected") {
  OCInstance oc;
  oc.center = make_point(0, 1, 1, 4);  // no longer equidistant
  CHECK_THROWS_AS(oc.validate(), std::invalid_argument);

  ILInstance il;
  il.rotator_target = make_point(-2, 0);  // not the quarter turn
  CHECK_THROWS_AS(il.validate(), std::invalid_argument);

  IOPInstance iop;
  iop.gap_low = Scalar(0);
  CHECK_THROWS_AS(iop.validate(), std::invalid_argument);
}

TEST_CASE("classification against the oscillation templates") {
  const OCInstance inst;
  CHECK(classify_oc(make_world(inst.formation_points(Formation::First)), inst) ==
        Formation::First);
  CHECK(classify_oc(make_world(inst.formation_points(Formation::Second)), inst) ==
        Formation::Second);

  // A mover caught between the stops matches nothing.
  const WorldState mid = make_world(
      {inst.triangle[0], inst.triangle[1], inst.triangle[2], make_point(0, 1, 5, 8)});
  CHECK(classify_oc(mid, inst) == Formation::Other);

  // Any rotated and scaled copy still classifies.
  std::mt19937_64 rng(5);
  for (int i = 0; i < 25; ++i) {
    const Transform t = testutil::random_transform(rng);
    std::vector<Point> moved;
    for (const auto& p : inst.formation_points(Formation::Third))
      moved.push_back(apply_transform(t, p));
    CHECK(classify_oc(make_world(moved), inst) == Formation::Third);
  }
}

TEST_CASE("check_oc accepts a scripted oscillation and counts periods") {
  const OCInstance inst;
  const OscillatorProgram program(inst);

  // Script: only the mover cycles, straight through two full periods.
  Schedule sched;
  sched.kind = SchedulerKind::Async;
  sched.robot_count = 4;
  sched.fairness_window = 200;
  for (int period = 0; period < 2; ++period) {
    for (int leg = 0; leg < 4; ++leg) {
      sched.events.push_back({AsyncEvent::Kind::Activate, 3, Scalar{}, RotScale::identity()});
      sched.events.push_back({AsyncEvent::Kind::FinishCompute, 3, Scalar{}, {}});
      sched.events.push_back({AsyncEvent::Kind::Progress, 3, make_scalar(1, 3), {}});
      sched.events.push_back({AsyncEvent::Kind::Progress, 3, make_scalar(2, 3), {}});
    }
  }
  const Trace trace = run(inst.initial_world(), program, Model::Fsta, sched);
  const Verdict verdict = check_oc(trace, inst, 2);
  CHECK(verdict.pass);
  CHECK(verdict.counters.at("periods") == 2);

  CHECK_FALSE(check_oc(trace, inst, 3).pass);  // one period short
}

TEST_CASE("check_oc rejects stalls and wrong orders") {
  const OCInstance inst;
  const auto first = inst.formation_points(Formation::First);
  const auto second = inst.formation_points(Formation::Second);
  const auto third = inst.formation_points(Formation::Third);

  const Verdict stall = check_oc(idle_trace({first, first, first}), inst, 1);
  CHECK_FALSE(stall.pass);
  REQUIRE(stall.violation.has_value());
  CHECK(stall.violation->rule == "liveness");

  const Verdict wrong_order = check_oc(idle_trace({first, second, first}), inst, 1);
  CHECK_FALSE(wrong_order.pass);
  REQUIRE(wrong_order.violation.has_value());
  CHECK(wrong_order.violation->rule == "formation-order");
  CHECK(wrong_order.violation->event_index == 2);

  std::vector<Point> off = first;
  off[3] = make_point(0, 1, 5, 8);
  const Verdict outside = check_oc(idle_trace({first, second, third, second, off}), inst, 1);
  CHECK_FALSE(outside.pass);
  REQUIRE(outside.violation.has_value());
  CHECK(outside.violation->rule == "idle-configuration");
}

TEST_CASE("check_il accepts the line former under fair asynchrony") {
  const ILInstance inst;
  const LineFormerProgram program(inst);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Trace trace =
        run(inst.initial_world(), program, Model::Fcom, async_schedule(seed, 150, 30, 3));
    const Verdict verdict = check_il(trace, inst, program);
    INFO("seed " << seed);
    CHECK(verdict.pass);
  }
}

TEST_CASE("check_il rejects wrong orders and restless finals") {
  const ILInstance inst;
  const LineFormerProgram program(inst);
  const auto first = inst.formation_points(Formation::First);
  const auto second = inst.formation_points(Formation::Second);
  const auto third = inst.formation_points(Formation::Third);

  const Verdict skipped = check_il(idle_trace({first, third}), inst, program);
  CHECK_FALSE(skipped.pass);
  REQUIRE(skipped.violation.has_value());
  CHECK(skipped.violation->rule == "formation-order");

  const Verdict unfinished = check_il(idle_trace({first, second}), inst, program);
  CHECK_FALSE(unfinished.pass);
  REQUIRE(unfinished.violation.has_value());
  CHECK(unfinished.violation->rule == "liveness");

  // A program that still wants to move in the final state fails quiescence.
  class RestlessProgram final : public Program {
   public:
    std::string name() const override { return "restless"; }
    Model model() const override { return Model::Fcom; }
    const std::vector<Color>& palette() const override {
    static const std::vector<Color> colors = {kNil};
    return colors;
  }
    ProgramOutput compute(const Snapshot&) const override {
      return {std::nullopt, make_point(1, 0)};
    }
  };
  const Verdict restless = check_il(idle_trace({first, second, third}), inst, RestlessProgram{});
  CHECK_FALSE(restless.pass);
  REQUIRE(restless.violation.has_value());
  CHECK(restless.violation->rule == "quiescence");
}

TEST_CASE("check_iop accepts the distance doubler and tracks milestones") {
  const IOPInstance inst;
  const DistanceDoublerProgram program;
  const Trace trace =
      run(inst.initial_world(), program, Model::Fsta, async_schedule(11, 400, 30, 3));
  const Verdict verdict = check_iop(trace, inst, 3);
  CHECK(verdict.pass);
  CHECK(verdict.counters.at("milestones_robot0") >= 6);
  CHECK(verdict.counters.at("milestones_robot2") >= 6);
}

TEST_CASE("check_iop rejects overshoots, drifting middles and stalls") {
  const IOPInstance inst;  // terminals at (-1,0) and (3/2,0), middle at the origin
  auto line_world = [&](std::int64_t low_num, std::int64_t low_den) {
    return std::vector<Point>{make_point(low_num, low_den, 0, 1), inst.middle,
                              inst.terminal_high()};
  };

  const Verdict overshoot = check_iop(
      idle_trace({line_world(-1, 1), line_world(-2, 1), line_world(-4, 1)}), inst, 1);
  CHECK_FALSE(overshoot.pass);
  REQUIRE(overshoot.violation.has_value());
  CHECK(overshoot.violation->rule == "range");
  CHECK(overshoot.violation->event_index == 2);

  const Verdict retreat = check_iop(
      idle_trace({line_world(-1, 1), line_world(-3, 2), line_world(-5, 4)}), inst, 1);
  CHECK_FALSE(retreat.pass);
  REQUIRE(retreat.violation.has_value());
  CHECK(retreat.violation->rule == "monotone-ascending");

  Trace moved_middle = idle_trace({line_world(-1, 1), line_world(-1, 1)});
  moved_middle.steps[0].after.robot(1).phase = IdlePhase{make_point(0, 1, 1, 8)};
  const Verdict drifted = check_iop(moved_middle, inst, 1);
  CHECK_FALSE(drifted.pass);
  REQUIRE(drifted.violation.has_value());
  CHECK(drifted.violation->rule == "middle-stationary");

  const Verdict stalled = check_iop(idle_trace({line_world(-1, 1), line_world(-1, 1)}), inst, 1);
  CHECK_FALSE(stalled.pass);
  REQUIRE(stalled.violation.has_value());
  CHECK(stalled.violation->rule == "liveness");
}

TEST_CASE("a symmetric oscillation-distance instance works despite its symmetry") {
  // Equal gaps give the start configuration a half-turn symmetry about the
  // middle robot; the algorithm only ever measures distances to the middle,
  // so behavior and verdicts are unaffected.
  IOPInstance inst;
  inst.gap_low = Scalar(2);
  inst.gap_high = Scalar(2);
  inst.validate();
  const DistanceDoublerProgram program;
  const Trace trace =
      run(inst.initial_world(), program, Model::Fsta, async_schedule(21, 300, 30, 3));
  CHECK(check_iop(trace, inst, 2).pass);
}

TEST_CASE("a steep random direction keeps everything exact") {
  IOPInstance inst;
  inst.middle = make_point(-3, 7, 5, 11);
  inst.direction = make_point(13, 9, -7, 12);
  inst.gap_low = make_scalar(5, 3);
  inst.gap_high = make_scalar(9, 7);
  inst.validate();
  const DistanceDoublerProgram program;
  const Trace trace =
      run(inst.initial_world(), program, Model::Fsta, async_schedule(22, 300, 30, 3));
  const Verdict verdict = check_iop(trace, inst, 2);
  CHECK(verdict.pass);
}

TEST_CASE("verdicts are pure functions of the trace") {
  const OCInstance inst;
  const OscillatorProgram program(inst);
  const Trace trace =
      run(inst.initial_world(), program, Model::Fsta, async_schedule(77, 300, 40, 4));
  const Verdict a = check_oc(trace, inst, 2);
  const Verdict b = check_oc(trace, inst, 2);
  CHECK(a.pass == b.pass);
  CHECK(a.counters == b.counters);
}

TEST_CASE("predicates are invariant under a global similarity") {
  std::mt19937_64 rng(31);
  const auto [oc, il, iop] = default_instances();

  const OscillatorProgram oscillator(oc);
  const Trace oc_trace =
      run(oc.initial_world(), oscillator, Model::Fsta, async_schedule(3, 300, 40, 4));
  const Verdict oc_ref = check_oc(oc_trace, oc, 2);

  for (int i = 0; i < 10; ++i) {
    const Transform t = testutil::random_transform(rng);
    const Verdict moved = check_oc(testutil::transform_trace(t, oc_trace), oc, 2);
    CHECK(moved.pass == oc_ref.pass);
    CHECK(moved.counters == oc_ref.counters);
  }

  const DistanceDoublerProgram doubler;
  const Trace iop_trace =
      run(iop.initial_world(), doubler, Model::Fsta, async_schedule(5, 300, 30, 3));
  const Verdict iop_ref = check_iop(iop_trace, iop, 2);
  REQUIRE(iop_ref.pass);
  for (int i = 0; i < 10; ++i) {
    const Transform t = testutil::random_transform(rng);
    // The instance must ride along for the middle-position identification.
    IOPInstance moved_inst = iop;
    moved_inst.middle = apply_transform(t, iop.middle);
    moved_inst.direction = t.multiplier.apply(iop.direction);
    const Verdict moved = check_iop(testutil::transform_trace(t, iop_trace), moved_inst, 2);
    CHECK(moved.pass == iop_ref.pass);
    CHECK(moved.counters == iop_ref.counters);
  }
}
