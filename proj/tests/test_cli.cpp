#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#ifndef LCMSIM_CLI_PATH
#error "LCMSIM_CLI_PATH must point at the built binary"
#endif

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_cli(const std::string& args) {
  const std::string cmd = std::string(LCMSIM_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  CommandResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) result.output.append(buf.data(), n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("run then check: the happy path") {
  const auto trace = temp_file("cli_oc_trace.jsonl");
  const auto ran = run_cli("run --algorithm alg_oc --scheduler ASYNC --seed 7 --horizon 500 "
                           "--fairness-window 40 --output " + trace.string());
  CHECK(ran.exit_code == 0);
  CHECK(std::filesystem::exists(trace));

  const auto checked = run_cli("check --trace " + trace.string() + " --min-cycles 3");
  CHECK(checked.exit_code == 0);
  const auto verdict = nlohmann::json::parse(checked.output);
  CHECK(verdict["pass"] == true);
}

TEST_CASE("runs are byte-reproducible for a fixed seed") {
  const auto a = temp_file("cli_repro_a.jsonl");
  const auto b = temp_file("cli_repro_b.jsonl");
  const std::string flags = "run --algorithm algo_iop --scheduler ASYNC --seed 11 --horizon 200 "
                            "--fairness-window 30 --output ";
  CHECK(run_cli(flags + a.string()).exit_code == 0);
  CHECK(run_cli(flags + b.string()).exit_code == 0);
  CHECK(read_file(a) == read_file(b));
}

TEST_CASE("model mismatches are usage errors") {
  CHECK(run_cli("run --algorithm comil --model OBLOT --horizon 100 --fairness-window 20")
            .exit_code == 1);
}

TEST_CASE("invalid scripted schedules are rejected with diagnostics") {
  const auto sched = temp_file("cli_bad_sched.json");
  std::ofstream(sched.string())
      << R"({"kind":"ASYNC","robot_count":4,"fairness_window":40,)"
      << R"("events":[{"kind":"progress","robot":0,"delta":"1/1"}]})";
  const auto trace = temp_file("cli_bad_trace.jsonl");
  const auto result = run_cli("run --algorithm alg_oc --scheduler scripted --schedule-file " +
                              sched.string() + " --output " + trace.string());
  CHECK(result.exit_code == 1);
}

TEST_CASE("a failing predicate exits 3") {
  const auto trace = temp_file("cli_null_trace.jsonl");
  CHECK(run_cli("run --algorithm always_null --scheduler ASYNC --seed 2 --horizon 300 "
                "--fairness-window 40 --output " + trace.string()).exit_code == 0);
  const auto checked = run_cli("check --trace " + trace.string() + " --problem oc --min-cycles 1");
  CHECK(checked.exit_code == 3);
  const auto verdict = nlohmann::json::parse(checked.output);
  CHECK(verdict["pass"] == false);
  CHECK(verdict["violation"]["rule"] == "liveness");
}

TEST_CASE("truncated traces exit 1") {
  const auto trace = temp_file("cli_truncated.jsonl");
  std::ofstream(trace.string()) << "{\"kind\":\"meta\",\"model\":\"FSTA\"";
  CHECK(run_cli("check --trace " + trace.string() + " --problem oc").exit_code == 1);
}

TEST_CASE("witness subcommand contracts") {
  const auto mimic = run_cli("witness --kind oc-oblot --program mimic_alg_oc");
  CHECK(mimic.exit_code == 0);
  const auto j = nlohmann::json::parse(mimic.output);
  CHECK(j["violated_cases"].size() >= 1);

  CHECK(run_cli("witness --kind oc-oblot --program comil").exit_code == 1);
  CHECK(run_cli("witness --kind iop-fcom --program move_away_mimic --depth 0").exit_code == 4);

  const auto found = run_cli("witness --kind iop-fcom --program move_away_mimic");
  CHECK(found.exit_code == 0);
  const auto w = nlohmann::json::parse(found.output);
  CHECK(w["verdict"]["violation"]["rule"] == "range");
}

TEST_CASE("relations subcommands") {
  const auto derived = run_cli("relations derive FSTA^A OBLOT^F");
  CHECK(derived.exit_code == 0);
  const auto j = nlohmann::json::parse(derived.output);
  CHECK(j["relation"] == "_|_");

  const auto verified = run_cli("relations verify");
  CHECK(verified.exit_code == 0);
  const auto report = nlohmann::json::parse(verified.output);
  CHECK(report["all_pass"] == true);
  CHECK(report["claims"].size() == 29);

  CHECK(run_cli("relations derive FSTA OBLOT^F").exit_code == 1);
}

TEST_CASE("a simulation error exits 2 and lands in the trace") {
  // Four robots all heading for the centroid collide after one round.
  const auto trace = temp_file("cli_collision.jsonl");
  const auto result = run_cli("run --algorithm move_to_centroid --scheduler FSYNC --seed 1 "
                              "--horizon 10 --fairness-window 4 --output " + trace.string());
  CHECK(result.exit_code == 2);
  const std::string contents = read_file(trace);
  CHECK(contents.find("\"error\"") != std::string::npos);
}

TEST_CASE("config files and scripted schedules drive runs") {
  const std::string samples = std::string(LCMSIM_SOURCE_DIR) + "/samples";
  const auto trace = temp_file("cli_config_trace.jsonl");
  const auto ran = run_cli("run --config " + samples + "/oscillation_async.json --output " +
                           trace.string());
  CHECK(ran.exit_code == 0);
  CHECK(run_cli("check --trace " + trace.string() + " --min-cycles 5").exit_code == 0);

  const auto scripted = temp_file("cli_scripted_trace.jsonl");
  const auto scripted_run =
      run_cli("run --algorithm comil --scheduler scripted --schedule-file " + samples +
              "/line_formation_scripted_schedule.json --output " + scripted.string());
  CHECK(scripted_run.exit_code == 0);
  CHECK(run_cli("check --trace " + scripted.string() + " --problem il").exit_code == 0);

  const std::string facts = std::string(LCMSIM_SOURCE_DIR) + "/data/facts.json";
  const auto verified = run_cli("relations verify --facts " + facts);
  CHECK(verified.exit_code == 0);
}

TEST_CASE("the output directory override is honored") {
  const auto dir = std::filesystem::temp_directory_path() / "lcmsim_out_dir";
  std::filesystem::create_directories(dir);
  const std::string cmd = std::string(LCMSIM_CLI_PATH) +
                          " run --algorithm algo_iop --seed 3 --horizon 150 --fairness-window 30 "
                          "--output env_trace.jsonl 2>/dev/null";
  const std::string with_env = "LCMSIM_OUTPUT_DIR=" + dir.string() + " " + cmd;
  REQUIRE(std::system(with_env.c_str()) == 0);
  CHECK(std::filesystem::exists(dir / "env_trace.jsonl"));
}
