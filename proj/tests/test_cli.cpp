#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "decision_gate/config_io.hpp"
#include "decision_gate/errors.hpp"

using namespace dgate;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(DECISION_GATE_BIN) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.output.append(buf.data(), n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = std::string("/tmp/dgate_test_") + name;
  std::ofstream out(path);
  out << content;
  return path;
}

const char* kExampleConfig = R"({
  "metrics": [
    {"id": "music_minutes", "roles": ["success"], "direction": "increase_good",
     "variance": 1.0, "mde": 0.2},
    {"id": "podcast_minutes", "roles": ["guardrail"], "direction": "increase_good",
     "variance": 1.0, "nim": 0.2},
    {"id": "crash_share", "roles": ["deterioration"], "direction": "decrease_good",
     "variance": 0.5},
    {"id": "srm", "roles": ["quality"], "direction": "increase_good"}
  ],
  "budget": {"alpha": 0.05, "alpha_minus": 0.05, "beta": 0.2},
  "policy": {"correction": "prop41", "nyholt": false},
  "sequential": {"k_looks": 10, "spending": "linear"}
})";

const char* kPassingResults = R"({
  "metrics": [
    {"id": "music_minutes", "estimate": 0.5, "std_error": 0.1,
     "n_treatment": 5000, "n_control": 5000},
    {"id": "podcast_minutes", "estimate": 0.05, "std_error": 0.05,
     "n_treatment": 5000, "n_control": 5000},
    {"id": "crash_share", "estimate": -0.001, "std_error": 0.01,
     "n_treatment": 5000, "n_control": 5000}
  ],
  "quality": {"srm": {"treatment_count": 5000, "control_count": 5000, "planned_ratio": 1.0}}
})";

}  // namespace

TEST_CASE("design: table output and exit 0") {
  const auto config = write_temp("config.json", kExampleConfig);
  const auto r = run_cli("design " + config);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("music_minutes:superiority") != std::string::npos);
  CHECK(r.output.find("required n per group") != std::string::npos);
  CHECK(r.output.back() == '\n');
}

TEST_CASE("design: json output reparses to the internal plan") {
  const auto config = write_temp("config.json", kExampleConfig);
  const auto r = run_cli("design " + config + " --format=json");
  CHECK(r.exit_code == 0);

  const ExperimentConfig parsed = parse_experiment_config(kExampleConfig);
  const DesignPlan plan = build_design_plan(parsed.metrics, parsed.budget, parsed.policy,
                                            std::nullopt, std::nullopt,
                                            parsed.auto_deterioration);
  CHECK(plan_to_json(plan) == r.output);
  // alpha_minus_star for S=1,G=1,D=1,Q=1 is 0.05/4
  CHECK(r.output.find("0.0125") != std::string::npos);
}

TEST_CASE("design: infeasible budget exits 3 with the named condition") {
  std::string broken = kExampleConfig;
  const auto pos = broken.find("\"alpha_minus\": 0.05");
  broken.replace(pos, std::string("\"alpha_minus\": 0.05").size(), "\"alpha_minus\": 0.3");
  const auto config = write_temp("bad_budget.json", broken);
  const auto r = run_cli("design " + config);
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("alpha_minus must be < beta") != std::string::npos);
}

TEST_CASE("design: schema violation exits 2 with a field path") {
  const auto config = write_temp("bad_schema.json", R"({
    "metrics": [{"id": "m", "roles": ["success"], "direction": "increase_good",
                 "variance": -1.0, "mde": 0.1}],
    "budget": {"alpha": 0.05, "alpha_minus": 0.01, "beta": 0.2},
    "policy": {"correction": "prop41"}
  })");
  const auto r = run_cli("design " + config);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("metrics[0].variance") != std::string::npos);
}

TEST_CASE("evaluate: all-pass fixture ships with exit 0") {
  const auto config = write_temp("config.json", kExampleConfig);
  const auto results = write_temp("results.json", kPassingResults);
  const auto r = run_cli("evaluate " + config + " " + results);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("SHIP") != std::string::npos);
}

TEST_CASE("evaluate: SRM failure blocks with exit 1") {
  const auto config = write_temp("config.json", kExampleConfig);
  std::string broken = kPassingResults;
  const auto pos = broken.find("\"treatment_count\": 5000");
  broken.replace(pos, std::string("\"treatment_count\": 5000").size(),
                 "\"treatment_count\": 6000");
  const auto pos2 = broken.find("\"control_count\": 5000");
  broken.replace(pos2, std::string("\"control_count\": 5000").size(), "\"control_count\": 4000");
  const auto results = write_temp("srm_fail.json", broken);
  const auto r = run_cli("evaluate " + config + " " + results + " --format=json");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("\"no_ship\"") != std::string::npos);
  CHECK(r.output.find("srm:quality") != std::string::npos);
}

TEST_CASE("evaluate: decrease_good metrics flip sign before testing") {
  // crash_share is decrease_good; a raw estimate of -0.5 tests as +0.5 and
  // must therefore NOT flag deterioration, while +0.05 (more crashes) must.
  const auto config = write_temp("config.json", kExampleConfig);
  std::string more_crashes = kPassingResults;
  const auto pos = more_crashes.find("\"estimate\": -0.001");
  more_crashes.replace(pos, std::string("\"estimate\": -0.001").size(), "\"estimate\": 0.05");
  const auto results = write_temp("crashes.json", more_crashes);
  const auto r = run_cli("evaluate " + config + " " + results);
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("crash_share:inferiority") != std::string::npos);
}

TEST_CASE("evaluate: missing metric exits 2") {
  const auto config = write_temp("config.json", kExampleConfig);
  std::string missing = kPassingResults;
  const auto pos = missing.find(R"({"id": "crash_share")");
  const auto end = missing.find("},", pos) + 2;
  missing.erase(pos, end - pos);
  const auto results = write_temp("missing.json", missing);
  const auto r = run_cli("evaluate " + config + " " + results);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("crash_share") != std::string::npos);
}

TEST_CASE("simulate: single replication, table format") {
  const auto r = run_cli("simulate --reps=1 --seed=3 --looks=2 --threads=1");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("scenario\tstructure\tcorrection") == 0);
}

TEST_CASE("simulate: invalid enum exits 2") {
  const auto r = run_cli("simulate --scenario=sideways --reps=10");
  CHECK(r.exit_code == 2);
}

TEST_CASE("simulate: deterministic output files") {
  const std::string out1 = "/tmp/dgate_test_sim1.tsv";
  const std::string out2 = "/tmp/dgate_test_sim2.tsv";
  const std::string flags =
      "simulate --scenario=status_quo --structure=independent --correction=prop41 "
      "--reps=2000 --seed=7 --threads=3 --out=";
  CHECK(run_cli(flags + out1).exit_code == 0);
  CHECK(run_cli(flags + out2).exit_code == 0);
  CHECK(read_file(out1) == read_file(out2));
  CHECK(!read_file(out1).empty());
  CHECK(read_file(out1).back() == '\n');
}

TEST_CASE("simulate: json format mirrors the report") {
  const auto r = run_cli(
      "simulate --reps=500 --seed=11 --looks=5 --threads=2 --format=json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"decision\"") != std::string::npos);
  CHECK(r.output.find("\"se\"") != std::string::npos);
}

TEST_CASE("design output covers every test id evaluate requires") {
  const ExperimentConfig parsed = parse_experiment_config(kExampleConfig);
  const DesignPlan plan = build_design_plan(parsed.metrics, parsed.budget, parsed.policy,
                                            std::nullopt, std::nullopt,
                                            parsed.auto_deterioration);
  const auto config = write_temp("config.json", kExampleConfig);
  const auto r = run_cli("design " + config);
  for (const auto& test : plan.tests) {
    CHECK(r.output.find(test.test_id) != std::string::npos);
  }
}
