// Command-line front end: run scenarios, check trace predicates, produce
// impossibility witnesses, and query the relation lattice. All outputs are
// machine-readable JSON; traces stream as JSON Lines.
//
// Exit codes: 0 pass, 1 usage/validation, 2 simulation error,
//             3 predicate fail, 4 search exhausted.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lcmsim/algorithms.hpp"
#include "lcmsim/impossibility.hpp"
#include "lcmsim/problems.hpp"
#include "lcmsim/relations.hpp"
#include "lcmsim/schedule.hpp"
#include "lcmsim/serialization.hpp"
#include "lcmsim/trace.hpp"

namespace {

using namespace lcmsim;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSimError = 2;
constexpr int kExitPredicateFail = 3;
constexpr int kExitExhausted = 4;

struct ProgramInfo {
  std::string problem;  // "oc", "il" or "iop"
  Model model;
};

ProgramInfo program_info(const std::string& name) {
  if (name == "alg_oc") return {"oc", Model::Fsta};
  if (name == "comil") return {"il", Model::Fcom};
  if (name == "algo_iop") return {"iop", Model::Fsta};
  if (name == "move_away_mimic" || name == "fcom_always_null") return {"iop", Model::Fcom};
  return {"oc", Model::Oblot};  // the lightless corpus runs on the oscillation instance
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return p;
  if (const char* dir = std::getenv("LCMSIM_OUTPUT_DIR")) return std::filesystem::path(dir) / p;
  return p;
}

struct Instances {
  OCInstance oc;
  ILInstance il;
  IOPInstance iop;
};

// Resolves "default", a file path, or inline JSON into the instance slot the
// problem needs, and validates it.
Instances resolve_instances(const std::string& problem, const std::string& spec_text) {
  Instances inst;
  if (!spec_text.empty() && spec_text != "default") {
    Json j;
    if (!spec_text.empty() && (spec_text.front() == '{' || spec_text.front() == '[')) {
      j = Json::parse(spec_text);
    } else {
      j = load_json_file(spec_text);
    }
    if (problem == "oc") inst.oc = oc_instance_from_json(j);
    else if (problem == "il") inst.il = il_instance_from_json(j);
    else if (problem == "iop") inst.iop = iop_instance_from_json(j);
    else throw std::invalid_argument("unknown problem: " + problem);
  }
  inst.oc.validate();
  inst.il.validate();
  inst.iop.validate();
  return inst;
}

WorldState initial_world_for(const std::string& problem, const Instances& inst) {
  if (problem == "oc") return inst.oc.initial_world();
  if (problem == "il") return inst.il.initial_world();
  if (problem == "iop") return inst.iop.initial_world();
  throw std::invalid_argument("unknown problem: " + problem);
}

Json instance_json_for(const std::string& problem, const Instances& inst) {
  if (problem == "oc") return to_json(inst.oc);
  if (problem == "il") return to_json(inst.il);
  return to_json(inst.iop);
}

struct RunOptions {
  std::string algorithm;
  std::string model_text;
  std::string scheduler_text = "ASYNC";
  std::uint64_t seed = 0;
  std::size_t horizon = 0;
  std::size_t fairness_window = 0;
  int max_progress_splits = 3;
  std::string frame_policy = "fresh";
  std::string schedule_file;
  std::string instance_spec = "default";
  std::string output = "trace.jsonl";
  std::string config_file;
  int min_cycles = 3;
};

void apply_config_file(RunOptions& opt) {
  if (opt.config_file.empty()) return;
  const Json cfg = load_json_file(opt.config_file);
  if (cfg.contains("algorithm") && opt.algorithm.empty())
    opt.algorithm = cfg["algorithm"].get<std::string>();
  if (cfg.contains("model") && opt.model_text.empty())
    opt.model_text = cfg["model"].get<std::string>();
  if (cfg.contains("instance") && opt.instance_spec == "default")
    opt.instance_spec = cfg["instance"].is_string() ? cfg["instance"].get<std::string>()
                                                    : cfg["instance"].dump();
  if (cfg.contains("min_cycles") && opt.min_cycles == 3)
    opt.min_cycles = cfg["min_cycles"].get<int>();
  if (cfg.contains("output") && opt.output == "trace.jsonl")
    opt.output = cfg["output"].get<std::string>();
  if (cfg.contains("scheduler")) {
    const Json& s = cfg["scheduler"];
    if (s.contains("kind")) opt.scheduler_text = s["kind"].get<std::string>();
    if (s.contains("file")) opt.schedule_file = s["file"].get<std::string>();
    if (s.contains("seed") && opt.seed == 0) opt.seed = s["seed"].get<std::uint64_t>();
    if (s.contains("horizon") && opt.horizon == 0) opt.horizon = s["horizon"].get<std::size_t>();
    if (s.contains("fairness_window") && opt.fairness_window == 0)
      opt.fairness_window = s["fairness_window"].get<std::size_t>();
    if (s.contains("max_progress_splits"))
      opt.max_progress_splits = s["max_progress_splits"].get<int>();
    if (s.contains("frame_policy")) opt.frame_policy = s["frame_policy"].get<std::string>();
  }
}

int cmd_run(RunOptions opt) {
  apply_config_file(opt);
  if (opt.algorithm.empty()) {
    std::cerr << "run: no algorithm given\n";
    return kExitUsage;
  }

  const ProgramInfo info = program_info(opt.algorithm);
  Instances inst;
  try {
    inst = resolve_instances(info.problem, opt.instance_spec);
  } catch (const std::exception& e) {
    std::cerr << "run: invalid instance: " << e.what() << "\n";
    return kExitUsage;
  }

  std::unique_ptr<Program> program;
  try {
    program = make_program(opt.algorithm, inst.oc, inst.il);
  } catch (const std::exception& e) {
    std::cerr << "run: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!opt.model_text.empty() && model_from_name(opt.model_text) != program->model()) {
    std::cerr << "run: algorithm " << opt.algorithm << " requires model "
              << model_name(program->model()) << ", got " << opt.model_text << "\n";
    return kExitUsage;
  }

  const WorldState world0 = initial_world_for(info.problem, inst);
  const int robot_count = static_cast<int>(world0.robots.size());

  Schedule schedule;
  try {
    if (!opt.schedule_file.empty() || opt.scheduler_text == "scripted") {
      if (opt.schedule_file.empty()) throw std::invalid_argument("scripted scheduler needs a file");
      schedule = schedule_from_json(load_json_file(opt.schedule_file));
    } else {
      AdversaryParams params;
      params.seed = opt.seed;
      params.horizon = opt.horizon ? opt.horizon : 600;
      params.fairness_window =
          opt.fairness_window ? opt.fairness_window : 10 * static_cast<std::size_t>(robot_count);
      params.max_progress_splits = opt.max_progress_splits;
      params.frame_policy = opt.frame_policy == "fixed" ? FramePolicy::FixedPerRobot
                                                        : FramePolicy::FreshPerActivation;
      const SchedulerKind kind = scheduler_from_name(opt.scheduler_text);
      schedule = kind == SchedulerKind::Async   ? generate_async(params, robot_count)
                 : kind == SchedulerKind::Ssync ? generate_ssync(params, robot_count)
                                                : generate_fsync(params, robot_count);
    }
  } catch (const std::exception& e) {
    std::cerr << "run: cannot build schedule: " << e.what() << "\n";
    return kExitUsage;
  }

  const auto violations = validate_schedule(schedule, robot_count);
  if (!violations.empty()) {
    std::cerr << "run: schedule is invalid:\n";
    for (const auto& v : violations)
      std::cerr << "  [" << v.index << "] " << v.rule << ": " << v.detail << "\n";
    return kExitUsage;
  }

  const auto out_path = resolve_output(opt.output);
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "run: cannot open output file " << out_path << "\n";
    return kExitUsage;
  }

  TraceMeta meta;
  meta.algorithm = program->name();
  meta.model = program->model();
  meta.scheduler = schedule.kind;
  meta.robot_count = robot_count;
  meta.problem = info.problem;
  meta.instance_json = instance_json_for(info.problem, inst).dump();
  out << meta_record(meta) << "\n";
  Json init = world_fields_json(world0);
  init["kind"] = "init";
  init["event_index"] = 0;
  out << init << "\n";

  std::uint64_t last_index = 0;
  try {
    run(world0, *program, program->model(), schedule,
        [&](const EventDescriptor& ev, const WorldState& after) {
          out << trace_record(ev, after) << "\n";
          last_index = after.event_index;
        });
  } catch (const std::exception& e) {
    out << Json{{"kind", "error"}, {"event_index", last_index + 1}, {"error", e.what()}} << "\n";
    std::cerr << "run: simulation error: " << e.what() << "\n";
    return kExitSimError;
  }
  std::cout << Json{{"trace", out_path.string()}, {"events", last_index}} << "\n";
  return kExitOk;
}

int cmd_check(const std::string& trace_path, std::string problem, const std::string& instance_spec,
              int min_cycles) {
  Trace trace;
  try {
    std::ifstream in(trace_path);
    if (!in) throw std::runtime_error("cannot open " + trace_path);
    trace = read_trace_jsonl(in);
  } catch (const std::exception& e) {
    std::cerr << "check: malformed trace: " << e.what() << "\n";
    return kExitUsage;
  }

  if (problem.empty()) problem = trace.meta.problem;
  if (problem.empty()) {
    std::cerr << "check: no problem given and none recorded in the trace\n";
    return kExitUsage;
  }

  Instances inst;
  try {
    std::string spec_text = instance_spec;
    if (spec_text == "default" && !trace.meta.instance_json.empty())
      spec_text = trace.meta.instance_json;
    inst = resolve_instances(problem, spec_text);
  } catch (const std::exception& e) {
    std::cerr << "check: invalid instance: " << e.what() << "\n";
    return kExitUsage;
  }

  Verdict verdict;
  try {
    if (problem == "oc") {
      verdict = check_oc(trace, inst.oc, min_cycles);
    } else if (problem == "il") {
      const auto program = make_program(trace.meta.algorithm, inst.oc, inst.il);
      verdict = check_il(trace, inst.il, *program);
    } else if (problem == "iop") {
      verdict = check_iop(trace, inst.iop, min_cycles);
    } else {
      std::cerr << "check: unknown problem " << problem << "\n";
      return kExitUsage;
    }
  } catch (const std::exception& e) {
    std::cerr << "check: " << e.what() << "\n";
    return kExitUsage;
  }
  std::cout << to_json(verdict) << "\n";
  return verdict.pass ? kExitOk : kExitPredicateFail;
}

int cmd_witness(const std::string& kind, const std::string& program_name,
                const std::string& instance_spec, int depth, int scalings, int min_cycles) {
  if (kind == "oc-oblot") {
    Instances inst;
    std::unique_ptr<Program> program;
    try {
      inst = resolve_instances("oc", instance_spec);
      program = make_program(program_name, inst.oc, inst.il);
      if (program->model() != Model::Oblot)
        throw std::invalid_argument("program " + program_name + " is not an OBLOT program");
    } catch (const std::exception& e) {
      std::cerr << "witness: " << e.what() << "\n";
      return kExitUsage;
    }
    const OcWitness w = oc_oblot_witness(*program, inst.oc);
    std::cout << to_json(w) << "\n";
    return kExitOk;
  }
  if (kind == "iop-fcom") {
    Instances inst;
    std::unique_ptr<Program> program;
    try {
      inst = resolve_instances("iop", instance_spec);
      program = make_program(program_name, inst.oc, inst.il);
      if (program->model() != Model::Fcom)
        throw std::invalid_argument("program " + program_name + " is not an FCOM program");
    } catch (const std::exception& e) {
      std::cerr << "witness: " << e.what() << "\n";
      return kExitUsage;
    }
    IopSearchParams params;
    params.depth = depth;
    params.instance_scalings = scalings;
    params.min_cycles = min_cycles;
    if (params.depth <= 0) {
      std::cout << Json{{"found", false}, {"detail", "empty search space"}} << "\n";
      return kExitExhausted;
    }
    const auto w = iop_fcom_search(*program, inst.iop, params);
    if (!w) {
      std::cout << Json{{"found", false},
                        {"detail", "no failing schedule within depth " + std::to_string(depth)}}
                << "\n";
      return kExitExhausted;
    }
    std::cout << to_json(*w) << "\n";
    return kExitOk;
  }
  std::cerr << "witness: unknown kind " << kind << " (expected oc-oblot or iop-fcom)\n";
  return kExitUsage;
}

std::vector<Fact> load_facts(const std::string& facts_file) {
  if (facts_file.empty()) return base_facts();
  return facts_from_json(load_json_file(facts_file));
}

int cmd_relations_derive(const std::string& x_text, const std::string& y_text,
                         const std::string& facts_file) {
  try {
    const ModelSched x = model_sched_from_string(x_text);
    const ModelSched y = model_sched_from_string(y_text);
    const Closure closure = Closure::close(load_facts(facts_file));
    const DerivedRelation rel = derive(closure, x, y);
    std::cout << Json{{"x", x_text},
                      {"y", y_text},
                      {"relation", relation_name(rel.relation)},
                      {"chain", rel.chain}}
              << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "relations derive: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_relations_verify(const std::string& facts_file) {
  try {
    const auto results = verify_claims(load_facts(facts_file));
    Json arr = Json::array();
    bool all_pass = true;
    for (const auto& r : results) {
      arr.push_back(to_json(r));
      all_pass = all_pass && r.pass;
    }
    std::cout << Json{{"claims", std::move(arr)}, {"all_pass", all_pass}} << "\n";
    return all_pass ? kExitOk : kExitPredicateFail;
  } catch (const std::exception& e) {
    std::cerr << "relations verify: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Look-Compute-Move robot workbench"};
  app.require_subcommand(1);

  RunOptions run_opt;
  auto* run_cmd = app.add_subcommand("run", "execute a scenario and write a JSONL trace");
  run_cmd->add_option("--algorithm", run_opt.algorithm, "registered program name");
  run_cmd->add_option("--model", run_opt.model_text, "OBLOT|FSTA|FCOM|LUMI (checked against the program)");
  run_cmd->add_option("--scheduler", run_opt.scheduler_text, "FSYNC|SSYNC|ASYNC|scripted");
  run_cmd->add_option("--seed", run_opt.seed, "adversary seed");
  run_cmd->add_option("--horizon", run_opt.horizon, "events (ASYNC) or rounds (sync)");
  run_cmd->add_option("--fairness-window", run_opt.fairness_window, "bounded fairness window");
  run_cmd->add_option("--max-progress-splits", run_opt.max_progress_splits,
                      "max Progress events per move");
  run_cmd->add_option("--frame-policy", run_opt.frame_policy, "fresh|fixed");
  run_cmd->add_option("--schedule-file", run_opt.schedule_file, "scripted schedule JSON");
  run_cmd->add_option("--instance", run_opt.instance_spec, "default, a file path, or inline JSON");
  run_cmd->add_option("--output", run_opt.output, "trace output path (JSONL)");
  run_cmd->add_option("--config", run_opt.config_file, "scenario config JSON");
  run_cmd->add_option("--min-cycles", run_opt.min_cycles, "recorded in configs; used by check");

  std::string check_trace, check_problem, check_instance = "default";
  int check_min_cycles = 3;
  auto* check_cmd = app.add_subcommand("check", "evaluate a problem predicate on a trace");
  check_cmd->add_option("--trace", check_trace, "trace JSONL file")->required();
  check_cmd->add_option("--problem", check_problem, "oc|il|iop (defaults to the trace meta)");
  check_cmd->add_option("--instance", check_instance, "default, a file path, or inline JSON");
  check_cmd->add_option("--min-cycles", check_min_cycles, "required full periods / oscillations");

  std::string witness_kind, witness_program, witness_instance = "default";
  int witness_depth = 12, witness_scalings = 3, witness_min_cycles = 1;
  auto* witness_cmd = app.add_subcommand("witness", "produce an impossibility witness");
  witness_cmd->add_option("--kind", witness_kind, "oc-oblot|iop-fcom")->required();
  witness_cmd->add_option("--program", witness_program, "registered program name")->required();
  witness_cmd->add_option("--instance", witness_instance, "default, a file path, or inline JSON");
  witness_cmd->add_option("--depth", witness_depth, "max rounds per candidate schedule");
  witness_cmd->add_option("--scalings", witness_scalings, "instance scalings to try");
  witness_cmd->add_option("--min-cycles", witness_min_cycles, "oscillations demanded of candidates");

  auto* relations_cmd = app.add_subcommand("relations", "query the relation lattice");
  relations_cmd->require_subcommand(1);
  std::string rel_x, rel_y, rel_facts;
  auto* derive_cmd = relations_cmd->add_subcommand("derive", "derive the relation of a pair");
  derive_cmd->add_option("x", rel_x, "e.g. FSTA^A")->required();
  derive_cmd->add_option("y", rel_y, "e.g. OBLOT^F")->required();
  derive_cmd->add_option("--facts", rel_facts, "facts JSON file (defaults to the built-in base)");
  auto* verify_cmd = relations_cmd->add_subcommand("verify", "evaluate the full claim catalog");
  verify_cmd->add_option("--facts", rel_facts, "facts JSON file (defaults to the built-in base)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(run_opt);
    if (check_cmd->parsed())
      return cmd_check(check_trace, check_problem, check_instance, check_min_cycles);
    if (witness_cmd->parsed())
      return cmd_witness(witness_kind, witness_program, witness_instance, witness_depth,
                         witness_scalings, witness_min_cycles);
    if (relations_cmd->parsed()) {
      if (derive_cmd->parsed()) return cmd_relations_derive(rel_x, rel_y, rel_facts);
      if (verify_cmd->parsed()) return cmd_relations_verify(rel_facts);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
