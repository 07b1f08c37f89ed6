#pragma once

#include <string_view>

#include "cvr/network.hpp"
#include "cvr/vehicle.hpp"

namespace cvr {

struct ReroutingConfig {
  bool enabled = false;
  TravelTimeOverride override_time = TravelTimeOverride::blocked();
  double caution_factor = 0.5;
};

enum class WarningOutcome { RouteKept, RouteChanged, CautionEngaged };

std::string_view to_string(WarningOutcome outcome);

/// Reacts to a breakdown warning. Irrelevant warnings (breakdown not ahead
/// on the remaining route) leave the vehicle untouched. Otherwise the
/// override is written to the vehicle's own view and the route from the end
/// of its current edge is recomputed; a path avoiding the breakdown edge
/// replaces the rest of the route, else the vehicle goes into Caution.
WarningOutcome handle_warning(VehicleState& v, const BreakdownLocation& breakdown,
                              const RoadNetwork& net, const TravelTimeOverride& override_time);

/// Caution mode until the vehicle passes `breakdown` or hears it resolved.
/// A broken-down vehicle is left alone.
void caution_mode(VehicleState& v, const BreakdownLocation& breakdown);

/// Drops the override for the breakdown's edge and releases Caution held for
/// it. The route is kept.
void handle_resolved(VehicleState& v, const BreakdownLocation& breakdown);

}  // namespace cvr
