#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "cvr/demand.hpp"
#include "cvr/network.hpp"
#include "cvr/vehicle.hpp"

namespace cvr {

struct TrafficParams {
  double dt = 1.0;               // s
  double caution_factor = 0.5;   // desired-speed multiplier in Caution mode
  double lookahead = 500.0;      // m, how far leaders are searched along the route
  double merge_horizon = 200.0;  // m before a shared entry lane where merging vehicles interact
};

/// Part of a vehicle's path during the last step: it covered (from, to] on
/// `edge`; `entered` marks a segment that began at the edge start.
struct MotionSegment {
  VehicleId vehicle = 0;
  EdgeIndex edge = 0;
  double from = 0.0;
  double to = 0.0;
  bool entered = false;
  double speed = 0.0;  // speed at the end of the step
};

struct WorldCounters {
  std::uint64_t inserted = 0;
  std::uint64_t arrived = 0;
  std::uint64_t removed = 0;  // by scenario action; nothing removes vehicles today
  std::uint64_t lane_changes = 0;
  std::uint64_t emergency_brakes = 0;  // braking beyond max_decel to keep a gap >= 0
  std::uint64_t entry_blocks = 0;      // edge entries refused by the admission check
  double insertion_delay = 0.0;        // s, summed over deferred insertions
};

struct PendingDeparture {
  DemandEntry entry;
  Route route;
};

/// Traffic state stepped by a single thread. Vehicles are kept in ascending
/// id order, which is also the update order.
struct World {
  RoadNetwork network;
  TrafficParams params;
  std::uint64_t seed = 0;
  double time = 0.0;

  std::map<VehicleId, VehicleState> vehicles;  // active
  std::vector<PendingDeparture> pending;       // sorted by (depart, id)
  std::vector<VehicleState> arrived;           // in arrival order
  std::vector<MotionSegment> last_motion;
  WorldCounters counters;

  VehicleState* find(VehicleId id);
  const VehicleState* find(VehicleId id) const;
  Point position(const VehicleState& v) const { return network.position_on_edge(v.edge(), v.pos); }
};

/// Builds a world and assigns every demand entry its initial shortest route
/// under the network's base weights. Throws cvr::NetworkError if an entry
/// has no route.
World make_world(RoadNetwork network, DemandSpec demand, TrafficParams params, std::uint64_t seed);

/// Desired-speed ceiling: min(class max speed, edge limit), times the
/// caution factor in Caution mode.
double speed_cap(const World& world, const VehicleState& v);

/// Inserts every pending vehicle due by `t` whose first edge has room
/// (last vehicle on the chosen lane at pos >= min_gap + its length);
/// others wait for a later step. Returns the inserted ids.
std::vector<VehicleId> spawn_step(World& world, double t);

/// Moves the world from `time` to `time + dt`: lane changes, Krauss
/// speeds (ascending id, leaders from the previous positions), position
/// update with edge transitions and arrivals.
void advance_world(World& world);

/// Smallest same-lane gap (front to rear bumper) over all consecutive pairs
/// on every edge lane; +inf with fewer than two vehicles on any lane.
double min_same_lane_gap(const World& world);

}  // namespace cvr
