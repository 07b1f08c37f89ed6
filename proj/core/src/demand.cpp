#include "cvr/demand.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "cvr/error.hpp"
#include "cvr/rng.hpp"

namespace cvr {

std::size_t DemandSpec::count(VehicleKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      schedule.begin(), schedule.end(), [&](const DemandEntry& e) { return e.kind == kind; }));
}

DemandSpec generate_demand(const DemandGenerator& gen, std::uint64_t scenario_seed) {
  if (gen.passenger_fraction < 0.0 || gen.passenger_fraction > 1.0) {
    throw ConfigError("demand.passenger_fraction must lie in [0, 1]");
  }
  if (!(gen.window >= 0.0)) throw ConfigError("demand.window_s must be >= 0");

  const auto passengers = static_cast<std::size_t>(
      std::llround(static_cast<double>(gen.total) * gen.passenger_fraction));
  std::vector<VehicleKind> kinds(gen.total, VehicleKind::Hgv);
  std::fill_n(kinds.begin(), passengers, VehicleKind::Passenger);

  Rng rng(derive_seed(scenario_seed, "demand"));
  for (std::size_t i = kinds.size(); i > 1; --i) {
    std::swap(kinds[i - 1], kinds[rng.below(i)]);
  }

  DemandSpec spec;
  spec.seed = scenario_seed;
  const double headway = gen.total > 0 ? gen.window / static_cast<double>(gen.total) : 0.0;
  for (std::size_t i = 0; i < gen.total; ++i) {
    spec.schedule.push_back({static_cast<VehicleId>(i), kinds[i], headway * static_cast<double>(i),
                             gen.origin, gen.destination});
  }
  return spec;
}

DemandSpec parse_demand(std::istream& in, std::string_view source_name) {
  DemandSpec spec;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string tag;
    if (!(fields >> tag)) continue;
    std::string where = fmt::format("{}:{}", source_name, line_no);
    if (tag != "VEH") throw NetworkError(fmt::format("{}: unknown record type '{}'", where, tag));
    std::string id, kind, depart;
    DemandEntry entry;
    if (!(fields >> id >> kind >> depart >> entry.origin >> entry.destination)) {
      throw NetworkError(fmt::format("{}: VEH expects 5 fields", where));
    }
    std::string extra;
    if (fields >> extra) throw NetworkError(fmt::format("{}: VEH expects 5 fields", where));
    auto parse_into = [&](const std::string& text, auto& value, std::string_view what) {
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw NetworkError(fmt::format("{}: invalid {} '{}'", where, what, text));
      }
    };
    parse_into(id, entry.id, "vehicle id");
    parse_into(depart, entry.depart, "departure time");
    try {
      entry.kind = parse_vehicle_kind(kind);
    } catch (const NetworkError& e) {
      throw NetworkError(fmt::format("{}: {}", where, e.what()));
    }
    spec.schedule.push_back(std::move(entry));
  }
  validate_demand(spec);
  return spec;
}

DemandSpec load_demand_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NetworkError(fmt::format("cannot open demand file {}", path.string()));
  return parse_demand(in, path.string());
}

std::string serialize_demand(const DemandSpec& demand) {
  std::string out;
  for (const DemandEntry& e : demand.schedule) {
    out += fmt::format("VEH {} {} {} {} {}\n", e.id, to_string(e.kind), e.depart, e.origin,
                       e.destination);
  }
  return out;
}

void validate_demand(DemandSpec& demand, const RoadNetwork* net) {
  std::set<VehicleId> ids;
  for (const DemandEntry& e : demand.schedule) {
    if (!ids.insert(e.id).second) {
      throw NetworkError(fmt::format("demand: duplicate vehicle id {}", e.id));
    }
    if (e.id < 0) throw NetworkError(fmt::format("demand: negative vehicle id {}", e.id));
    if (!std::isfinite(e.depart) || e.depart < 0.0) {
      throw NetworkError(
          fmt::format("demand: vehicle {} has invalid departure {}", e.id, e.depart));
    }
    if (net != nullptr) {
      if (!net->find_node(e.origin)) {
        throw NetworkError(
            fmt::format("demand: vehicle {} origin {} not in network", e.id, e.origin));
      }
      if (!net->find_node(e.destination)) {
        throw NetworkError(
            fmt::format("demand: vehicle {} destination {} not in network", e.id, e.destination));
      }
    }
  }
  std::stable_sort(demand.schedule.begin(), demand.schedule.end(),
                   [](const DemandEntry& a, const DemandEntry& b) {
                     if (a.depart != b.depart) return a.depart < b.depart;
                     return a.id < b.id;
                   });
}

}  // namespace cvr
