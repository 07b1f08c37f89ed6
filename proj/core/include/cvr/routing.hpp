#pragma once

#include <optional>
#include <string_view>

#include "cvr/network.hpp"

namespace cvr {

struct PathResult {
  Route route;
  double cost = 0.0;  // s
};

/// Minimum travel-time route between two nodes (Dijkstra). Edge weights are
/// effective_travel_time() under `view`; blocked edges are never used.
/// Among equal-cost routes the lexicographically smallest edge-id sequence
/// wins. Returns std::nullopt when the destination is unreachable or equals
/// the origin (a route is never empty).
std::optional<PathResult> shortest_path(const RoadNetwork& net, NodeIndex from, NodeIndex to,
                                        const OverrideMap& view = {});

/// Id-based overload. Unknown node ids throw cvr::NetworkError, which is
/// distinct from the std::nullopt "no path" result.
std::optional<PathResult> shortest_path(const RoadNetwork& net, std::string_view from,
                                        std::string_view to, const OverrideMap& view = {});

/// Sum of effective travel times along `route`.
double route_cost(const RoadNetwork& net, const Route& route, const OverrideMap& view = {});

}  // namespace cvr
