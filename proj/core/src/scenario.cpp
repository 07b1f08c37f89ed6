#include "cvr/scenario.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "cvr/builtin.hpp"
#include "cvr/error.hpp"
#include "cvr/network_io.hpp"
#include "ini.hpp"

namespace cvr {
namespace {

constexpr std::string_view kBuiltinPrefix = "builtin:";
constexpr std::string_view kDetectorPrefix = "detector:";

using ini::format_number;

std::string format_bool(bool b) { return b ? "true" : "false"; }

std::vector<VehicleId> parse_id_list(ini::Section& s, std::string_view key) {
  std::vector<VehicleId> ids;
  auto text = s.take(key);
  if (!text) return ids;
  std::istringstream in(*text);
  std::string token;
  while (in >> token) {
    VehicleId id = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), id);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      s.fail(key, fmt::format("expected vehicle ids, got '{}'", token));
    }
    ids.push_back(id);
  }
  return ids;
}

void validate_config(const ScenarioConfig& c) {
  if (!(c.dt > 0.0)) throw ConfigError(fmt::format("scenario.dt_s must be positive, got {}", c.dt));
  if (!(c.end_time > 0.0)) {
    throw ConfigError(fmt::format("scenario.end_time_s must be positive, got {}", c.end_time));
  }
  if (!(c.stall_threshold > 0.0)) {
    throw ConfigError(
        fmt::format("scenario.stall_threshold_s must be positive, got {}", c.stall_threshold));
  }
  if (!(c.generator.passenger_fraction >= 0.0 && c.generator.passenger_fraction <= 1.0)) {
    throw ConfigError(fmt::format("demand.passenger_fraction must lie in [0, 1], got {}",
                                  c.generator.passenger_fraction));
  }
  if (!(c.generator.window >= 0.0)) {
    throw ConfigError(fmt::format("demand.window_s must be >= 0, got {}", c.generator.window));
  }
  if (!(c.rerouting.caution_factor > 0.0 && c.rerouting.caution_factor <= 1.0)) {
    throw ConfigError(fmt::format("rerouting.caution_factor must lie in (0, 1], got {}",
                                  c.rerouting.caution_factor));
  }
  c.comm.validate();
  c.breakdown.validate();
}

}  // namespace

ScenarioConfig parse_scenario(std::istream& in, const std::filesystem::path& base_dir,
                              std::string_view source_name) {
  ini::Document doc = ini::read(in, source_name);
  ScenarioConfig c;
  c.base_dir = base_dir;
  c.generator.origin = "O";
  c.generator.destination = "D";
  bool has_demand_section = false;

  for (const std::string& name : doc.sections) {
    ini::Section s(name, doc.tree.get_child(boost::property_tree::ptree::path_type(name, '\0')));
    if (name == "scenario") {
      c.name = s.text("name", c.name);
      c.network_source = s.text("network", c.network_source);
      c.demand_source = s.text("demand", c.demand_source);
      c.end_time = s.number("end_time_s", c.end_time);
      c.dt = s.number("dt_s", c.dt);
      c.seed = s.unsigned_integer("seed", c.seed);
      c.stall_threshold = s.number("stall_threshold_s", c.stall_threshold);
    } else if (name == "demand") {
      has_demand_section = true;
      c.generator.total = s.unsigned_integer("total", c.generator.total);
      c.generator.passenger_fraction =
          s.number("passenger_fraction", c.generator.passenger_fraction);
      c.generator.window = s.number("window_s", c.generator.window);
      c.generator.origin = s.text("origin", c.generator.origin);
      c.generator.destination = s.text("destination", c.generator.destination);
    } else if (name == "comm") {
      c.comm.beacon_interval = s.number("beacon_interval_s", c.comm.beacon_interval);
      c.comm.range = s.number("range_m", c.comm.range);
      c.comm.tx_power_mw = s.number("tx_power_mw", c.comm.tx_power_mw);
      c.comm.antenna_height = s.number("antenna_height_m", c.comm.antenna_height);
      c.comm.packet_size = static_cast<int>(s.integer("packet_size_bytes", c.comm.packet_size));
      c.comm.max_hops = static_cast<int>(s.integer("max_hops", c.comm.max_hops));
      c.comm.log_beacons = s.boolean("log_beacons", c.comm.log_beacons);
    } else if (name == "breakdown") {
      c.breakdown.target = s.integer("target", c.breakdown.target);
      c.breakdown.count = static_cast<int>(s.integer("count", c.breakdown.count));
      c.breakdown.start = s.number("start_s", c.breakdown.start);
      c.breakdown.duration = s.number("duration_s", c.breakdown.duration);
      c.breakdown.interval = s.number("interval_s", c.breakdown.interval);
      c.breakdown.random = s.boolean("random", c.breakdown.random);
    } else if (name == "rerouting") {
      c.rerouting.enabled = s.boolean("enabled", c.rerouting.enabled);
      if (auto v = s.take("override")) {
        try {
          c.rerouting.override_time = TravelTimeOverride::parse(*v);
        } catch (const Error& e) {
          s.fail("override", e.what());
        }
      }
      c.rerouting.caution_factor = s.number("caution_factor", c.rerouting.caution_factor);
    } else if (name == "output") {
      c.trace = s.boolean("trace", c.trace);
      if (auto ids = parse_id_list(s, "profile_vehicles"); !ids.empty()) c.profile_vehicles = ids;
    } else if (name.rfind(kDetectorPrefix, 0) == 0) {
      DetectorSpec d;
      d.id = name.substr(kDetectorPrefix.size());
      if (d.id.empty()) throw ConfigError(fmt::format("{}: empty detector id", name));
      auto edge = s.take("edge");
      if (!edge) s.fail("edge", "required");
      d.edge = *edge;
      d.pos = s.number("pos_m", std::numeric_limits<double>::quiet_NaN());
      if (std::isnan(d.pos)) s.fail("pos_m", "required");
      c.detectors.push_back(d);
    } else {
      throw ConfigError(fmt::format("{}: unknown section [{}]", source_name, name));
    }
    s.finish();
  }

  if (c.network_source.empty()) throw ConfigError("scenario.network: required");
  if (has_demand_section && !c.demand_source.empty()) {
    throw ConfigError("scenario.demand: a demand file and a [demand] generator are exclusive");
  }
  if (c.network_source.rfind(kBuiltinPrefix, 0) != 0 &&
      !std::filesystem::exists(base_dir / c.network_source)) {
    throw ConfigError(fmt::format("scenario.network: file not found: {}",
                                  (base_dir / c.network_source).string()));
  }
  if (!c.demand_source.empty() && !std::filesystem::exists(base_dir / c.demand_source)) {
    throw ConfigError(
        fmt::format("scenario.demand: file not found: {}", (base_dir / c.demand_source).string()));
  }
  validate_config(c);
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open scenario file {}", path.string()));
  return parse_scenario(in, path.parent_path(), path.string());
}

ConfigEcho echo_scenario(const ScenarioConfig& c) {
  ConfigEcho echo;
  echo.push_back({"scenario",
                  {{"name", c.name},
                   {"network", c.network_source},
                   {"end_time_s", format_number(c.end_time)},
                   {"dt_s", format_number(c.dt)},
                   {"seed", std::to_string(c.seed)},
                   {"stall_threshold_s", format_number(c.stall_threshold)}}});
  if (!c.demand_source.empty()) {
    echo.back().second.insert(echo.back().second.begin() + 2, {"demand", c.demand_source});
  } else {
    echo.push_back({"demand",
                    {{"total", std::to_string(c.generator.total)},
                     {"passenger_fraction", format_number(c.generator.passenger_fraction)},
                     {"window_s", format_number(c.generator.window)},
                     {"origin", c.generator.origin},
                     {"destination", c.generator.destination}}});
  }
  echo.push_back({"comm",
                  {{"beacon_interval_s", format_number(c.comm.beacon_interval)},
                   {"range_m", format_number(c.comm.range)},
                   {"tx_power_mw", format_number(c.comm.tx_power_mw)},
                   {"antenna_height_m", format_number(c.comm.antenna_height)},
                   {"packet_size_bytes", std::to_string(c.comm.packet_size)},
                   {"max_hops", std::to_string(c.comm.max_hops)},
                   {"log_beacons", format_bool(c.comm.log_beacons)}}});
  echo.push_back({"breakdown",
                  {{"target", std::to_string(c.breakdown.target)},
                   {"count", std::to_string(c.breakdown.count)},
                   {"start_s", format_number(c.breakdown.start)},
                   {"duration_s", format_number(c.breakdown.duration)},
                   {"interval_s", format_number(c.breakdown.interval)},
                   {"random", format_bool(c.breakdown.random)}}});
  echo.push_back({"rerouting",
                  {{"enabled", format_bool(c.rerouting.enabled)},
                   {"override", c.rerouting.override_time.to_string()},
                   {"caution_factor", format_number(c.rerouting.caution_factor)}}});
  std::string profiles;
  for (VehicleId id : c.profile_vehicles)
    profiles += (profiles.empty() ? "" : " ") + std::to_string(id);
  echo.push_back({"output", {{"trace", format_bool(c.trace)}}});
  if (!profiles.empty()) echo.back().second.push_back({"profile_vehicles", profiles});
  for (const DetectorSpec& d : c.detectors) {
    echo.push_back({fmt::format("{}{}", kDetectorPrefix, d.id),
                    {{"edge", d.edge}, {"pos_m", format_number(d.pos)}}});
  }
  return echo;
}

std::string render_scenario(const ScenarioConfig& config) {
  std::string out;
  for (const auto& [section, keys] : echo_scenario(config)) {
    if (!out.empty()) out += '\n';
    out += fmt::format("[{}]\n", section);
    for (const auto& [k, v] : keys) out += fmt::format("{} = {}\n", k, v);
  }
  return out;
}

RoadNetwork resolve_network(const ScenarioConfig& c) {
  if (c.network) return *c.network;
  if (c.network_source.empty()) throw ConfigError("scenario.network: required");
  if (c.network_source.rfind(kBuiltinPrefix, 0) == 0) {
    return builtin_network(std::string_view(c.network_source).substr(kBuiltinPrefix.size()));
  }
  return load_network_file(c.base_dir / c.network_source);
}

DemandSpec resolve_demand(const ScenarioConfig& c, const RoadNetwork& net) {
  DemandSpec demand;
  if (c.demand) {
    demand = *c.demand;
  } else if (!c.demand_source.empty()) {
    demand = load_demand_file(c.base_dir / c.demand_source);
  } else {
    demand = generate_demand(c.generator, c.seed);
  }
  validate_demand(demand, &net);
  return demand;
}

RunResult run_scenario(const ScenarioConfig& config, const RunHooks& hooks) {
  validate_config(config);
  RunResult result;
  result.config = config;

  RoadNetwork net = resolve_network(config);
  DemandSpec demand = resolve_demand(config, net);
  DetectorBank detectors(net, config.detectors);
  for (const Edge& e : net.edges()) result.edge_ids.push_back(e.id);

  TrafficParams params;
  params.dt = config.dt;
  params.caution_factor = config.rerouting.caution_factor;
  const std::uint64_t demand_size = demand.total();
  World world = make_world(std::move(net), std::move(demand), params, config.seed);

  std::optional<V2xLayer> v2x;
  if (config.rerouting.enabled) v2x.emplace(config.comm);
  IncidentState incident = initialize_schedule(config.breakdown, 0.0);

  RunSummary& summary = result.summary;
  std::set<VehicleId> cautioned;
  // Latest resolution each receiver heard, per broken-down vehicle; older
  // warnings still in flight are ignored.
  std::map<std::pair<VehicleId, VehicleId>, double> resolved_at;
  auto handler = [&](VehicleId receiver, const V2xMessage& msg) {
    VehicleState* v = world.find(receiver);
    if (v == nullptr || !msg.breakdown) return;
    const auto key = std::make_pair(receiver, msg.breakdown->vehicle);
    if (msg.kind == MessageKind::BreakdownResolved) {
      double& at = resolved_at[key];
      at = std::max(at, msg.sent_at);
      handle_resolved(*v, *msg.breakdown);
      return;
    }
    if (auto it = resolved_at.find(key); it != resolved_at.end() && msg.sent_at <= it->second)
      return;
    const WarningOutcome outcome =
        handle_warning(*v, *msg.breakdown, world.network, config.rerouting.override_time);
    ++summary.warning_outcomes[std::string(to_string(outcome))];
    if (outcome == WarningOutcome::CautionEngaged) cautioned.insert(receiver);
  };

  std::set<VehicleId> profiled(config.profile_vehicles.begin(), config.profile_vehicles.end());
  std::vector<double> accels;
  constexpr double kEps = 1e-9;
  while (world.time < config.end_time - kEps) {
    const double t = world.time;
    if (v2x) v2x->begin_step(world);
    fire_due(incident, world, v2x ? &*v2x : nullptr, t, config.seed);
    if (v2x) {
      v2x->beacon_step(world, t);
      warning_emit_step(incident, world, *v2x, t);
      v2x->relay_step(world, handler);
    }
    spawn_step(world, t);
    advance_world(world);
    detectors.step(world);

    for (const auto& [id, v] : world.vehicles) {
      accels.push_back(v.accel);
      if (config.trace) result.trace.push_back({world.time, id, v.edge(), v.pos, v.speed, v.accel});
      if (profiled.count(id) != 0) {
        TimeSeries& ts = summary.profiles[id];
        ts.t.push_back(world.time);
        ts.speed.push_back(v.speed);
        ts.accel.push_back(v.accel);
      }
    }
    if (hooks.after_step) hooks.after_step(world);
    if (world.pending.empty() && world.vehicles.empty()) break;
  }

  for (const VehicleState& v : world.arrived)
    result.journeys.push_back(make_journey(v, world.network));
  std::sort(result.journeys.begin(), result.journeys.end(),
            [](const JourneyRecord& a, const JourneyRecord& b) { return a.vehicle < b.vehicle; });

  summary.name = config.name;
  summary.seed = config.seed;
  summary.end_time = world.time;
  summary.demand = demand_size;
  summary.inserted = world.counters.inserted;
  summary.arrived = world.counters.arrived;
  summary.unfinished = world.pending.size() + world.vehicles.size();
  summary.incomplete = summary.arrived == 0 || summary.unfinished > 0;
  if (!result.journeys.empty()) {
    double delay = 0.0;
    double journey = 0.0;
    for (const JourneyRecord& r : result.journeys) {
      delay += r.delay;
      journey += r.journey_time;
      summary.max_delay = std::max(summary.max_delay, r.delay);
      if (r.rerouted) ++summary.rerouted;
    }
    const auto n = static_cast<double>(result.journeys.size());
    summary.mean_delay = delay / n;
    summary.mean_journey_time = journey / n;
  }
  for (const auto& [id, v] : world.vehicles) {
    if (v.rerouted) ++summary.rerouted;
    if (v.slow_since >= 0.0 && world.time - v.slow_since >= config.stall_threshold) {
      summary.stalled.push_back(id);
    }
  }
  if (!summary.stalled.empty()) {
    spdlog::warn("{}: {} vehicle(s) stalled longer than {} s", config.name, summary.stalled.size(),
                 config.stall_threshold);
  }
  summary.caution_engaged = cautioned.size();
  summary.warnings_emitted = incident.warnings_emitted;
  if (v2x) {
    summary.v2x = v2x->stats();
    result.messages = v2x->deliveries();
  }
  summary.decel = decel_stats(accels);
  for (const DetectorSpec& d : detectors.specs())
    summary.detector_counts[d.id] = detectors.count(d.id);
  result.detector_hits = detectors.hits();
  summary.traffic = world.counters;
  summary.transitions = incident.log;
  return result;
}

std::string vehicles_csv(const RunResult& run) {
  std::string out = "vehicle,class,depart,arrive,journey_time,free_flow_time,delay,rerouted\n";
  for (const JourneyRecord& r : run.journeys) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", r.vehicle, to_string(r.kind), r.depart,
                       r.arrive, r.journey_time, r.free_flow_time, r.delay, r.rerouted ? 1 : 0);
  }
  return out;
}

std::string trace_csv(const RunResult& run) {
  std::string out = "t,vehicle,edge,pos,speed,accel\n";
  for (const StepTraceRow& r : run.trace) {
    out += fmt::format("{},{},{},{},{},{}\n", r.t, r.vehicle, run.edge_ids.at(r.edge), r.pos,
                       r.speed, r.accel);
  }
  return out;
}

std::string messages_csv(const RunResult& run) {
  std::string out = "t,kind,origin,seq,sender,receiver,hop_count\n";
  for (const DeliveryRow& r : run.messages) {
    out += fmt::format("{},{},{},{},{},{},{}\n", r.t, to_string(r.kind), r.origin, r.seq, r.sender,
                       r.receiver, r.hop_count);
  }
  return out;
}

std::string detectors_csv(const RunResult& run) {
  std::string out = "detector,t,vehicle,speed\n";
  for (const DetectorHit& h : run.detector_hits) {
    out += fmt::format("{},{},{},{}\n", h.detector, h.t, h.vehicle, h.speed);
  }
  return out;
}

std::string summary_json(const RunResult& run) {
  using nlohmann::ordered_json;
  const RunSummary& s = run.summary;
  ordered_json j;
  j["name"] = s.name;
  j["seed"] = s.seed;
  ordered_json config = ordered_json::object();
  for (const auto& [section, keys] : echo_scenario(run.config)) {
    ordered_json& sec = config[section];
    for (const auto& [k, v] : keys) sec[k] = v;
  }
  j["config"] = config;
  j["end_time"] = s.end_time;
  j["demand"] = s.demand;
  j["inserted"] = s.inserted;
  j["arrived"] = s.arrived;
  j["unfinished"] = s.unfinished;
  j["incomplete"] = s.incomplete;
  j["mean_delay"] = s.mean_delay;
  j["max_delay"] = s.max_delay;
  j["mean_journey_time"] = s.mean_journey_time;
  j["rerouted"] = s.rerouted;
  j["caution_engaged"] = s.caution_engaged;
  j["warning_outcomes"] = s.warning_outcomes;
  j["warnings_emitted"] = s.warnings_emitted;
  j["v2x"] = {{"broadcasts", s.v2x.broadcasts},
              {"deliveries", s.v2x.deliveries},
              {"relays", s.v2x.relays},
              {"handler_calls", s.v2x.handler_calls},
              {"duplicate_handler_calls", s.v2x.duplicate_handler_calls}};
  j["decel"] = {{"mean", s.decel.mean}, {"variance", s.decel.variance}, {"count", s.decel.count}};
  j["detectors"] = s.detector_counts;
  j["stalled"] = s.stalled;
  j["traffic"] = {{"inserted", s.traffic.inserted},
                  {"arrived", s.traffic.arrived},
                  {"removed", s.traffic.removed},
                  {"lane_changes", s.traffic.lane_changes},
                  {"emergency_brakes", s.traffic.emergency_brakes},
                  {"entry_blocks", s.traffic.entry_blocks},
                  {"insertion_delay", s.traffic.insertion_delay}};
  ordered_json transitions = ordered_json::array();
  for (const TransitionRecord& r : s.transitions) {
    transitions.push_back({{"at", r.at},
                           {"step", r.step},
                           {"kind", to_string(r.kind)},
                           {"vehicle", r.vehicle},
                           {"applied", r.applied}});
  }
  j["transitions"] = transitions;
  ordered_json profiles = ordered_json::object();
  for (const auto& [id, ts] : s.profiles) {
    profiles[std::to_string(id)] = {{"t", ts.t}, {"speed", ts.speed}, {"accel", ts.accel}};
  }
  j["profiles"] = profiles;
  return j.dump(2) + "\n";
}

void write_run(const RunResult& run, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& file, const std::string& text) {
    std::ofstream out(dir / file, std::ios::binary);
    if (!out) throw Error(fmt::format("cannot write {}", (dir / file).string()));
    out << text;
  };
  write("vehicles.csv", vehicles_csv(run));
  if (run.config.trace) write("trace.csv", trace_csv(run));
  write("messages.csv", messages_csv(run));
  write("detectors.csv", detectors_csv(run));
  write("summary.json", summary_json(run));
  write("scenario.resolved.ini", render_scenario(run.config));
}

}  // namespace cvr
