// cvrsim: command line front end for the co-simulator.
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include "cvr/error.hpp"
#include "cvr/matrix.hpp"
#include "cvr/network_io.hpp"
#include "cvr/scenario.hpp"

namespace {

void print_summary(const cvr::RunSummary& s) {
  fmt::print("{}: arrived {}/{}, mean delay {:.2f} s, max delay {:.2f} s, mean journey {:.2f} s\n",
             s.name, s.arrived, s.demand, s.mean_delay, s.max_delay, s.mean_journey_time);
  fmt::print("  rerouted {}, caution {}, warnings {}, decel mean {:.4f} var {:.4f} (n={})\n",
             s.rerouted, s.caution_engaged, s.warnings_emitted, s.decel.mean, s.decel.variance,
             s.decel.count);
  if (s.incomplete)
    fmt::print("  incomplete: {} vehicle(s) unfinished at t={}\n", s.unfinished, s.end_time);
  if (!s.stalled.empty()) fmt::print("  stalled: {} vehicle(s)\n", s.stalled.size());
}

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed,
            const std::string& out) {
  cvr::ScenarioConfig config = cvr::load_scenario(scenario_path);
  if (seed) config.seed = *seed;
  const cvr::RunResult run = cvr::run_scenario(config);
  const std::filesystem::path dir =
      out.empty() ? std::filesystem::path("out") / config.name : std::filesystem::path(out);
  cvr::write_run(run, dir);
  print_summary(run.summary);
  fmt::print("outputs in {}\n", dir.string());
  return 0;
}

int cmd_matrix(const std::string& matrix_path, unsigned jobs, const std::string& out) {
  const cvr::MatrixConfig matrix = cvr::load_matrix(matrix_path);
  const cvr::MatrixResult result = cvr::run_matrix(matrix, jobs);
  const std::filesystem::path dir =
      out.empty() ? std::filesystem::path("out") / matrix.name : std::filesystem::path(out);
  cvr::write_matrix(result, dir);
  fmt::print("{}", cvr::comparison_text(result));
  fmt::print("outputs in {}\n", dir.string());
  return 0;
}

int cmd_net_validate(const std::string& path) {
  const cvr::RoadNetwork net = cvr::load_network_file(path);
  fmt::print("{}: ok, {} nodes, {} edges\n", path, net.node_count(), net.edge_count());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic traffic and V2X co-simulator"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log debug output");

  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  CLI::App* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("--scenario", scenario_path, "Scenario file")->required();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--out", out, "Output directory (default out/<name>)");

  std::string matrix_path;
  unsigned jobs = 1;
  CLI::App* matrix = app.add_subcommand("matrix", "Run an experiment matrix and compare");
  matrix->add_option("--config", matrix_path, "Matrix file")->required();
  matrix->add_option("--jobs", jobs, "Parallel runs (0 = all cores)");
  matrix->add_option("--out", out, "Output directory (default out/<name>)");

  std::string network_path;
  CLI::App* net = app.add_subcommand("net", "Road network utilities");
  net->require_subcommand(1);
  CLI::App* validate = net->add_subcommand("validate", "Check a network file");
  validate->add_option("file", network_path, "Network file")->required();

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::warn);

  try {
    if (run->parsed()) return cmd_run(scenario_path, seed, out);
    if (matrix->parsed()) return cmd_matrix(matrix_path, jobs, out);
    if (validate->parsed()) return cmd_net_validate(network_path);
  } catch (const cvr::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
