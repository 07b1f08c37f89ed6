#include "cvr/matrix.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <thread>

#include "cvr/error.hpp"
#include "ini.hpp"

namespace cvr {
namespace {

constexpr std::string_view kRunPrefix = "run:";

const RunComparison* find_role(const GroupComparison& g, RunRole role) {
  for (const RunComparison& r : g.runs) {
    if (r.role == role) return &r;
  }
  return nullptr;
}

}  // namespace

std::string_view to_string(RunRole role) {
  switch (role) {
    case RunRole::Baseline:
      return "baseline";
    case RunRole::Disabled:
      return "disabled";
    case RunRole::Enabled:
      return "enabled";
    case RunRole::AsIs:
      return "as-is";
  }
  return "?";
}

RunRole parse_run_role(std::string_view text) {
  if (text == "baseline") return RunRole::Baseline;
  if (text == "disabled") return RunRole::Disabled;
  if (text == "enabled") return RunRole::Enabled;
  if (text == "as-is") return RunRole::AsIs;
  throw ConfigError(fmt::format("unknown run role '{}'", text));
}

ScenarioConfig apply_role(ScenarioConfig config, RunRole role) {
  switch (role) {
    case RunRole::Baseline:
      config.breakdown.count = 0;
      config.rerouting.enabled = false;
      break;
    case RunRole::Disabled:
      config.rerouting.enabled = false;
      break;
    case RunRole::Enabled:
      config.rerouting.enabled = true;
      break;
    case RunRole::AsIs:
      break;
  }
  if (role != RunRole::Baseline && role != RunRole::AsIs && config.breakdown.count == 0) {
    throw ConfigError(fmt::format("role {} needs a scenario with a breakdown", to_string(role)));
  }
  return config;
}

MatrixConfig parse_matrix(std::istream& in, const std::filesystem::path& base_dir,
                          std::string_view source_name) {
  ini::Document doc = ini::read(in, source_name);
  MatrixConfig m;
  std::set<std::string> ids;
  for (const std::string& name : doc.sections) {
    ini::Section s(name, doc.tree.get_child(boost::property_tree::ptree::path_type(name, '\0')));
    if (name == "matrix") {
      m.name = s.text("name", m.name);
      m.seed = s.unsigned_integer("seed");
    } else if (name.rfind(kRunPrefix, 0) == 0) {
      MatrixRun run;
      run.id = name.substr(kRunPrefix.size());
      if (run.id.empty()) throw ConfigError(fmt::format("{}: empty run id", name));
      if (!ids.insert(run.id).second) throw ConfigError(fmt::format("duplicate run {}", run.id));
      auto scenario = s.take("scenario");
      if (!scenario) s.fail("scenario", "required");
      run.group = s.text("group", run.id);
      try {
        run.role = parse_run_role(s.text("role", "as-is"));
        run.scenario = apply_role(load_scenario(base_dir / *scenario), run.role);
      } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("{}: {}", name, e.what()));
      }
      m.runs.push_back(std::move(run));
    } else {
      throw ConfigError(fmt::format("{}: unknown section [{}]", source_name, name));
    }
    s.finish();
  }
  if (m.runs.empty()) throw ConfigError(fmt::format("{}: no [run:ID] sections", source_name));
  if (m.seed) {
    for (MatrixRun& run : m.runs) run.scenario.seed = *m.seed;
  }
  for (MatrixRun& run : m.runs) run.scenario.name = run.id;
  return m;
}

MatrixConfig load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open matrix file {}", path.string()));
  return parse_matrix(in, path.parent_path(), path.string());
}

double percent_change(double base, double x) { return (x - base) / base * 100.0; }

double round2(double x) { return std::round(x * 100.0) / 100.0; }

std::vector<GroupComparison> compare_runs(const MatrixConfig& matrix,
                                          const std::vector<RunResult>& results) {
  if (results.size() != matrix.runs.size()) throw Error("run results do not match the matrix");
  std::vector<GroupComparison> groups;
  std::map<std::string, std::size_t> group_index;
  for (std::size_t i = 0; i < matrix.runs.size(); ++i) {
    auto [it, fresh] = group_index.try_emplace(matrix.runs[i].group, groups.size());
    if (fresh)
      groups.push_back({matrix.runs[i].group, std::nullopt, {}, std::nullopt, std::nullopt});
  }

  for (GroupComparison& g : groups) {
    const RunResult* base = nullptr;
    for (std::size_t i = 0; i < matrix.runs.size(); ++i) {
      if (matrix.runs[i].group == g.group && matrix.runs[i].role == RunRole::Baseline) {
        base = &results[i];
        g.baseline = matrix.runs[i].id;
        break;
      }
    }
    std::map<VehicleId, double> base_journey;
    if (base != nullptr) {
      for (const JourneyRecord& r : base->journeys) base_journey[r.vehicle] = r.journey_time;
    }
    for (std::size_t i = 0; i < matrix.runs.size(); ++i) {
      if (matrix.runs[i].group != g.group) continue;
      const RunResult& run = results[i];
      RunComparison c;
      c.run = matrix.runs[i].id;
      c.role = matrix.runs[i].role;
      c.mean_delay = run.summary.mean_delay;
      c.mean_journey_time = run.summary.mean_journey_time;
      c.decel = run.summary.decel;
      c.rerouted = run.summary.rerouted;
      if (base != nullptr) {
        double sum = 0.0;
        for (const JourneyRecord& r : run.journeys) {
          auto it = base_journey.find(r.vehicle);
          if (it == base_journey.end()) continue;
          sum += r.journey_time - it->second;
          ++c.paired;
        }
        if (c.paired > 0) c.differential_delay = sum / static_cast<double>(c.paired);
        c.decel_mean_change = percent_change(base->summary.decel.mean, c.decel.mean);
        c.decel_variance_change = percent_change(base->summary.decel.variance, c.decel.variance);
      }
      g.runs.push_back(c);
    }
    const RunComparison* disabled = find_role(g, RunRole::Disabled);
    const RunComparison* enabled = find_role(g, RunRole::Enabled);
    if (disabled != nullptr && enabled != nullptr) {
      if (base != nullptr && enabled->differential_delay != 0.0) {
        g.delay_ratio = disabled->differential_delay / enabled->differential_delay;
      }
      g.journey_time_change = enabled->mean_journey_time - disabled->mean_journey_time;
    }
  }
  return groups;
}

MatrixResult run_matrix(const MatrixConfig& matrix, unsigned jobs) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n = matrix.runs.size();
  std::vector<std::optional<RunResult>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i] = run_scenario(matrix.runs[i].scenario);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw Error(fmt::format("run {} failed: {}", matrix.runs[i].id, e.what()));
    }
  }

  MatrixResult result;
  result.config = matrix;
  for (auto& slot : slots) result.runs.push_back(std::move(*slot));
  result.groups = compare_runs(matrix, result.runs);
  return result;
}

std::string comparison_json(const MatrixResult& result) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["matrix"] = result.config.name;
  ordered_json groups = ordered_json::array();
  for (const GroupComparison& g : result.groups) {
    ordered_json gj;
    gj["group"] = g.group;
    gj["baseline"] = g.baseline ? ordered_json(*g.baseline) : ordered_json(nullptr);
    ordered_json runs = ordered_json::array();
    for (const RunComparison& c : g.runs) {
      ordered_json rj;
      rj["run"] = c.run;
      rj["role"] = to_string(c.role);
      rj["mean_delay"] = c.mean_delay;
      rj["differential_delay"] = c.differential_delay;
      rj["paired_vehicles"] = c.paired;
      rj["mean_journey_time"] = c.mean_journey_time;
      rj["rerouted"] = c.rerouted;
      rj["decel_mean"] = c.decel.mean;
      rj["decel_variance"] = c.decel.variance;
      rj["decel_samples"] = c.decel.count;
      if (g.baseline) {
        rj["decel_mean_change_pct"] = round2(c.decel_mean_change);
        rj["decel_variance_change_pct"] = round2(c.decel_variance_change);
      }
      runs.push_back(rj);
    }
    gj["runs"] = runs;
    gj["delay_ratio_disabled_over_enabled"] =
        g.delay_ratio ? ordered_json(*g.delay_ratio) : ordered_json(nullptr);
    gj["journey_time_enabled_minus_disabled"] =
        g.journey_time_change ? ordered_json(*g.journey_time_change) : ordered_json(nullptr);
    groups.push_back(gj);
  }
  j["groups"] = groups;
  return j.dump(2) + "\n";
}

std::string comparison_text(const MatrixResult& result) {
  std::string out = fmt::format("matrix {}\n", result.config.name);
  for (const GroupComparison& g : result.groups) {
    out += fmt::format("\ngroup {}\n", g.group);
    out += fmt::format("{:<12} {:<9} {:>11} {:>11} {:>12} {:>9} {:>11} {:>9} {:>11} {:>9}\n", "run",
                       "role", "delay_s", "diff_s", "journey_s", "rerouted", "decel_mean", "chg_%",
                       "decel_var", "chg_%");
    for (const RunComparison& c : g.runs) {
      const std::string mean_change = g.baseline ? fmt::format("{:.2f}", c.decel_mean_change) : "-";
      const std::string var_change =
          g.baseline ? fmt::format("{:.2f}", c.decel_variance_change) : "-";
      out += fmt::format(
          "{:<12} {:<9} {:>11.2f} {:>11.2f} {:>12.2f} {:>9} {:>11.4f} {:>9} {:>11.4f} {:>9}\n",
          c.run, to_string(c.role), c.mean_delay, c.differential_delay, c.mean_journey_time,
          c.rerouted, c.decel.mean, mean_change, c.decel.variance, var_change);
    }
    if (g.delay_ratio) out += fmt::format("delay ratio disabled/enabled: {:.2f}\n", *g.delay_ratio);
    if (g.journey_time_change) {
      out += fmt::format("journey time enabled - disabled: {:.2f} s\n", *g.journey_time_change);
    }
  }
  return out;
}

void write_matrix(const MatrixResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < result.runs.size(); ++i) {
    write_run(result.runs[i], dir / result.config.runs[i].id);
  }
  std::ofstream(dir / "comparison.json", std::ios::binary) << comparison_json(result);
  std::ofstream(dir / "comparison.txt", std::ios::binary) << comparison_text(result);
}

}  // namespace cvr
