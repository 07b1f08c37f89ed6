#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cvr/network.hpp"
#include "cvr/vehicle.hpp"

namespace cvr {

struct DemandEntry {
  VehicleId id = 0;
  VehicleKind kind = VehicleKind::Passenger;
  double depart = 0.0;  // s
  std::string origin;
  std::string destination;

  friend bool operator==(const DemandEntry&, const DemandEntry&) = default;
};

struct DemandSpec {
  std::vector<DemandEntry> schedule;  // sorted by (depart, id)
  std::uint64_t seed = 0;

  std::size_t total() const { return schedule.size(); }
  std::size_t count(VehicleKind kind) const;
};

/// Inline demand generator: `total` vehicles leaving `origin` for
/// `destination` at evenly spaced times over [0, window), with exactly
/// round(total * passenger_fraction) passenger cars in a seeded random order.
struct DemandGenerator {
  std::size_t total = 400;
  double passenger_fraction = 0.8;
  double window = 800.0;  // s
  std::string origin;
  std::string destination;
};

DemandSpec generate_demand(const DemandGenerator& gen, std::uint64_t scenario_seed);

// Demand file: one record per line, `VEH <id> <class> <depart_s> <origin> <dest>`,
// class in {PASSENGER, HGV}; `#` starts a comment.
DemandSpec parse_demand(std::istream& in, std::string_view source_name = "<input>");
DemandSpec load_demand_file(const std::filesystem::path& path);
std::string serialize_demand(const DemandSpec& demand);

/// Sorts the schedule and checks ids are unique, departures are finite and
/// nonnegative, and (when `net` is given) endpoints exist.
void validate_demand(DemandSpec& demand, const RoadNetwork* net = nullptr);

}  // namespace cvr
