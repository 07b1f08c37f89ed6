#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cvr/scenario.hpp"

namespace cvr {

// Role of a run inside a comparison group:
//   baseline  no breakdown, no V2X
//   disabled  breakdown, no V2X
//   enabled   breakdown, V2X warnings and rerouting
//   as-is     the scenario file unchanged
enum class RunRole { Baseline, Disabled, Enabled, AsIs };

std::string_view to_string(RunRole role);
RunRole parse_run_role(std::string_view text);

/// The scenario with breakdown presence and the V2X switch set for `role`.
ScenarioConfig apply_role(ScenarioConfig config, RunRole role);

struct MatrixRun {
  std::string id;
  std::string group;
  RunRole role = RunRole::AsIs;
  ScenarioConfig scenario;  // role already applied
};

// Matrix file (INI):
//
//   [matrix]   name, seed (optional; overrides every scenario seed)
//   [run:ID]   scenario (path), group, role (baseline|disabled|enabled|as-is)
//
// Runs keep file order.
struct MatrixConfig {
  std::string name = "matrix";
  std::optional<std::uint64_t> seed;
  std::vector<MatrixRun> runs;
};

MatrixConfig parse_matrix(std::istream& in, const std::filesystem::path& base_dir,
                          std::string_view source_name = "<input>");
MatrixConfig load_matrix(const std::filesystem::path& path);

/// (x - base) / base * 100.
double percent_change(double base, double x);
/// Rounded half away from zero to two decimals, as printed in tables.
double round2(double x);

struct RunComparison {
  std::string run;
  RunRole role = RunRole::AsIs;
  double mean_delay = 0.0;          // against free flow
  double differential_delay = 0.0;  // mean journey-time excess over the baseline run, same vehicles
  std::uint64_t paired = 0;         // vehicles arrived in both this run and the baseline
  double mean_journey_time = 0.0;
  DecelStats decel;
  double decel_mean_change = 0.0;  // % vs baseline
  double decel_variance_change = 0.0;
  std::uint64_t rerouted = 0;
};

struct GroupComparison {
  std::string group;
  std::optional<std::string> baseline;
  std::vector<RunComparison> runs;            // matrix order
  std::optional<double> delay_ratio;          // disabled / enabled differential delay
  std::optional<double> journey_time_change;  // enabled - disabled mean journey time
};

std::vector<GroupComparison> compare_runs(const MatrixConfig& matrix,
                                          const std::vector<RunResult>& results);

struct MatrixResult {
  MatrixConfig config;
  std::vector<RunResult> runs;  // matrix order
  std::vector<GroupComparison> groups;
};

/// Runs every scenario, up to `jobs` at a time (0 = hardware threads), and
/// compares them. A failing run aborts with cvr::Error naming the run.
MatrixResult run_matrix(const MatrixConfig& matrix, unsigned jobs = 1);

std::string comparison_json(const MatrixResult& result);
std::string comparison_text(const MatrixResult& result);

/// One subdirectory per run plus comparison.json and comparison.txt.
void write_matrix(const MatrixResult& result, const std::filesystem::path& dir);

}  // namespace cvr
