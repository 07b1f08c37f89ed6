#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cvr/demand.hpp"
#include "cvr/incident.hpp"
#include "cvr/metrics.hpp"
#include "cvr/network.hpp"
#include "cvr/rerouting.hpp"
#include "cvr/v2x.hpp"
#include "cvr/world.hpp"

namespace cvr {

// Scenario file (INI):
//
//   [scenario]   name, network (path or builtin:NAME), demand (path, optional),
//                end_time_s, dt_s, seed, stall_threshold_s
//   [demand]     total, passenger_fraction, window_s, origin, destination
//                (generator used when scenario.demand is absent)
//   [comm]       beacon_interval_s, range_m, tx_power_mw, antenna_height_m,
//                packet_size_bytes, max_hops, log_beacons
//   [breakdown]  target, count, start_s, duration_s, interval_s, random
//   [rerouting]  enabled, override (seconds or "blocked"), caution_factor
//   [output]     trace, profile_vehicles (space separated ids)
//   [detector:ID] edge, pos_m
//
// Relative paths are resolved against the scenario file's directory.
struct ScenarioConfig {
  std::string name = "scenario";
  std::string network_source;  // path or builtin:NAME
  std::string demand_source;   // path; empty means the generator
  std::filesystem::path base_dir;

  // Set directly by embedders and tests; take precedence over the sources.
  std::optional<RoadNetwork> network;
  std::optional<DemandSpec> demand;

  DemandGenerator generator;
  CommConfig comm;
  BreakdownSchedule breakdown;
  ReroutingConfig rerouting;
  double dt = 1.0;
  double end_time = 1000.0;
  std::uint64_t seed = 1;
  double stall_threshold = 600.0;
  bool trace = true;
  std::vector<VehicleId> profile_vehicles;
  std::vector<DetectorSpec> detectors;
};

/// Parses and validates a scenario. Unknown sections or keys and malformed
/// values throw cvr::ConfigError naming `section.key`.
ScenarioConfig parse_scenario(std::istream& in, const std::filesystem::path& base_dir,
                              std::string_view source_name = "<input>");
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Every setting with defaults filled in, as (section, [(key, value)]).
using ConfigEcho =
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>>;
ConfigEcho echo_scenario(const ScenarioConfig& config);
/// echo_scenario() in the scenario file syntax; parses back to the same
/// configuration.
std::string render_scenario(const ScenarioConfig& config);

RoadNetwork resolve_network(const ScenarioConfig& config);
DemandSpec resolve_demand(const ScenarioConfig& config, const RoadNetwork& net);

struct TimeSeries {
  std::vector<double> t;
  std::vector<double> speed;
  std::vector<double> accel;
};

struct RunSummary {
  std::string name;
  std::uint64_t seed = 0;
  double end_time = 0.0;  // time the loop stopped
  std::uint64_t demand = 0;
  std::uint64_t inserted = 0;
  std::uint64_t arrived = 0;
  std::uint64_t unfinished = 0;  // still pending or on the road
  bool incomplete = false;
  double mean_delay = 0.0;
  double max_delay = 0.0;
  double mean_journey_time = 0.0;
  std::uint64_t rerouted = 0;
  std::uint64_t caution_engaged = 0;  // vehicles that entered Caution at least once
  std::map<std::string, std::uint64_t> warning_outcomes;
  std::uint64_t warnings_emitted = 0;
  V2xStats v2x;
  DecelStats decel;
  std::map<std::string, std::uint64_t> detector_counts;
  std::vector<VehicleId> stalled;
  WorldCounters traffic;
  std::vector<TransitionRecord> transitions;
  std::map<VehicleId, TimeSeries> profiles;
};

struct RunResult {
  ScenarioConfig config;
  std::vector<std::string> edge_ids;  // by EdgeIndex, for the CSVs
  RunSummary summary;
  std::vector<JourneyRecord> journeys;  // arrived vehicles, ascending id
  std::vector<StepTraceRow> trace;      // empty unless config.trace
  std::vector<DeliveryRow> messages;
  std::vector<DetectorHit> detector_hits;
};

struct RunHooks {
  // Called after every step with the world at the new time.
  std::function<void(const World&)> after_step;
};

/// Runs the step loop until end_time or until every vehicle has arrived.
/// Per step: incident transitions, beacons and warnings, relay and
/// rerouting handlers, insertion, motion, detectors and trace.
RunResult run_scenario(const ScenarioConfig& config, const RunHooks& hooks = {});

std::string vehicles_csv(const RunResult& run);
std::string trace_csv(const RunResult& run);
std::string messages_csv(const RunResult& run);
std::string detectors_csv(const RunResult& run);
std::string summary_json(const RunResult& run);

/// Writes vehicles.csv, trace.csv (when traced), messages.csv,
/// detectors.csv, summary.json and scenario.resolved.ini into `dir`.
void write_run(const RunResult& run, const std::filesystem::path& dir);

}  // namespace cvr
