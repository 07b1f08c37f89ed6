#include "cvr/rerouting.hpp"

#include <algorithm>

#include "cvr/routing.hpp"

namespace cvr {

std::string_view to_string(WarningOutcome outcome) {
  switch (outcome) {
    case WarningOutcome::RouteKept:
      return "kept";
    case WarningOutcome::RouteChanged:
      return "changed";
    case WarningOutcome::CautionEngaged:
      return "caution";
  }
  return "?";
}

WarningOutcome handle_warning(VehicleState& v, const BreakdownLocation& breakdown,
                              const RoadNetwork& net, const TravelTimeOverride& override_time) {
  if (v.id == breakdown.vehicle || v.mode == DriveMode::BrokenDown) {
    return WarningOutcome::RouteKept;
  }
  if (v.edge() == breakdown.edge) {
    // Past it: nothing to avoid. Behind it: no way around from mid-edge.
    if (v.pos > breakdown.pos) return WarningOutcome::RouteKept;
    v.view.insert_or_assign(breakdown.edge, override_time);
    caution_mode(v, breakdown);
    return WarningOutcome::CautionEngaged;
  }
  const auto rest_begin = v.route.edges.begin() + static_cast<std::ptrdiff_t>(v.route_index) + 1;
  if (std::find(rest_begin, v.route.edges.end(), breakdown.edge) == v.route.edges.end()) {
    return WarningOutcome::RouteKept;
  }

  v.view.insert_or_assign(breakdown.edge, override_time);
  auto path = shortest_path(net, net.target(v.edge()), v.route.destination, v.view);
  if (!path || std::find(path->route.edges.begin(), path->route.edges.end(), breakdown.edge) !=
                   path->route.edges.end()) {
    caution_mode(v, breakdown);
    return WarningOutcome::CautionEngaged;
  }
  v.route.edges.erase(rest_begin, v.route.edges.end());
  v.route.edges.insert(v.route.edges.end(), path->route.edges.begin(), path->route.edges.end());
  v.rerouted = true;
  return WarningOutcome::RouteChanged;
}

void caution_mode(VehicleState& v, const BreakdownLocation& breakdown) {
  if (v.mode == DriveMode::BrokenDown) return;
  v.mode = DriveMode::Caution;
  v.caution_for = breakdown;
}

void handle_resolved(VehicleState& v, const BreakdownLocation& breakdown) {
  v.view.erase(breakdown.edge);
  if (v.mode == DriveMode::Caution && v.caution_for &&
      v.caution_for->vehicle == breakdown.vehicle && v.caution_for->edge == breakdown.edge) {
    v.mode = DriveMode::Normal;
    v.caution_for.reset();
  }
}

}  // namespace cvr
