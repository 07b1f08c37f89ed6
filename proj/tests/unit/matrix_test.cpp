#include "cvr/matrix.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cvr/error.hpp"

using namespace cvr;

namespace {

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const char* name) : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

void write_small_scenario(const std::filesystem::path& dir) {
  std::ofstream(dir / "small.ini") << R"([scenario]
network = builtin:junction
end_time_s = 1500
seed = 3
[demand]
total = 60
window_s = 120
[breakdown]
count = 1
start_s = 60
duration_s = 200
[rerouting]
enabled = true
)";
}

MatrixConfig parse(const std::string& text, const std::filesystem::path& dir) {
  std::istringstream in(text);
  return parse_matrix(in, dir, "m.ini");
}

const char* kThreeRuns = R"([matrix]
name = small
seed = 5
[run:base]
scenario = small.ini
group = g
role = baseline
[run:off]
scenario = small.ini
group = g
role = disabled
[run:on]
scenario = small.ini
group = g
role = enabled
)";

}  // namespace

TEST_CASE("roles shape the scenario") {
  TempDir tmp("cvr_matrix_roles");
  write_small_scenario(tmp.path);
  MatrixConfig m = parse(kThreeRuns, tmp.path);
  REQUIRE(m.runs.size() == 3);
  CHECK(m.runs[0].scenario.breakdown.count == 0);
  CHECK_FALSE(m.runs[0].scenario.rerouting.enabled);
  CHECK(m.runs[1].scenario.breakdown.count == 1);
  CHECK_FALSE(m.runs[1].scenario.rerouting.enabled);
  CHECK(m.runs[2].scenario.rerouting.enabled);
  for (const MatrixRun& r : m.runs) {
    CHECK(r.scenario.seed == 5);
    CHECK(r.scenario.name == r.id);
  }
}

TEST_CASE("matrix errors") {
  TempDir tmp("cvr_matrix_errors");
  write_small_scenario(tmp.path);
  CHECK_THROWS_AS(parse("[matrix]\nname = x\n", tmp.path), ConfigError);
  CHECK_THROWS_AS(parse("[run:a]\nscenario = small.ini\nrole = sideways\n", tmp.path), ConfigError);
  CHECK_THROWS_AS(parse("[run:a]\ngroup = g\n", tmp.path), ConfigError);
  CHECK_THROWS_AS(parse("[run:a]\nscenario = nope.ini\n", tmp.path), ConfigError);
  CHECK_THROWS_AS(parse("[run:a]\nscenario = small.ini\n[run:a]\nscenario = small.ini\n", tmp.path),
                  ConfigError);
  CHECK_THROWS_AS(parse("[runs]\n", tmp.path), ConfigError);
  ScenarioConfig calm;
  CHECK_THROWS_AS(apply_role(calm, RunRole::Enabled), ConfigError);
  CHECK_NOTHROW(apply_role(calm, RunRole::Baseline));
}

TEST_CASE("comparison against the baseline") {
  TempDir tmp("cvr_matrix_compare");
  write_small_scenario(tmp.path);
  MatrixConfig m = parse(kThreeRuns, tmp.path);
  MatrixResult result = run_matrix(m, 1);
  REQUIRE(result.groups.size() == 1);
  const GroupComparison& g = result.groups[0];
  CHECK(g.baseline == "base");
  REQUIRE(g.runs.size() == 3);
  CHECK(g.runs[0].differential_delay == 0.0);
  CHECK(g.runs[0].decel_mean_change == 0.0);
  CHECK(g.runs[1].paired == 60);
  CHECK(g.runs[1].rerouted == 0);
  REQUIRE(g.journey_time_change);
  CHECK(*g.journey_time_change ==
        doctest::Approx(g.runs[2].mean_journey_time - g.runs[1].mean_journey_time));

  // Same results on two threads.
  MatrixResult parallel = run_matrix(m, 2);
  CHECK(comparison_json(parallel) == comparison_json(result));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(trace_csv(parallel.runs[i]) == trace_csv(result.runs[i]));
  }

  write_matrix(result, tmp.path / "out");
  CHECK(std::filesystem::exists(tmp.path / "out" / "comparison.json"));
  CHECK(std::filesystem::exists(tmp.path / "out" / "on" / "summary.json"));
  CHECK(comparison_text(result).find("group g") != std::string::npos);
}

TEST_CASE("helpers") {
  CHECK(percent_change(2.0, 3.0) == 50.0);
  CHECK(round2(1.23456) == 1.23);
  CHECK(parse_run_role("as-is") == RunRole::AsIs);
  CHECK(to_string(RunRole::Disabled) == "disabled");
}
