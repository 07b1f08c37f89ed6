#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cvr/incident.hpp"
#include "cvr/network.hpp"
#include "cvr/rng.hpp"
#include "cvr/vehicle.hpp"
#include "cvr/world.hpp"

namespace cvr::test {

// Edges with speed 1 m/s, so the free-flow time equals the length.
inline Edge timed_edge(std::string id, std::string from, std::string to, double seconds,
                       int lanes = 1) {
  return Edge{std::move(id), std::move(from), std::move(to), seconds, 1.0, lanes};
}

inline RoadNetwork diamond(double ab = 10, double ac = 15, double bd = 10, double cd = 10) {
  return build_network({{"A", 0, 0}, {"B", 100, 100}, {"C", 100, -100}, {"D", 200, 0}},
                       {timed_edge("AB", "A", "B", ab), timed_edge("AC", "A", "C", ac),
                        timed_edge("BD", "B", "D", bd), timed_edge("CD", "C", "D", cd)});
}

/// A single straight edge S->T along the x axis.
inline RoadNetwork straight(double length, double speed = kMotorwayCap, int lanes = 1) {
  return build_network({{"S", 0, 0}, {"T", length, 0}},
                       {Edge{"ST", "S", "T", length, speed, lanes}});
}

/// Random digraph on `n` nodes with integer weights in [1, 20].
inline RoadNetwork random_graph(Rng& rng, std::size_t n, double density) {
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    nodes.push_back({"n" + std::to_string(i), static_cast<double>(i), 0.0});
  }
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || rng.uniform01() >= density) continue;
      const double w = static_cast<double>(1 + rng.below(20));
      edges.push_back(timed_edge("e" + std::to_string(a) + "_" + std::to_string(b), nodes[a].id,
                                 nodes[b].id, w));
    }
  }
  return build_network(std::move(nodes), std::move(edges));
}

/// Minimum cost over all simple paths by exhaustive DFS, with the
/// lexicographically smallest edge-id sequence among the cheapest.
struct BrutePath {
  double cost = 0.0;
  std::vector<std::string> edge_ids;
};

inline std::optional<BrutePath> brute_force_path(const RoadNetwork& net, NodeIndex from,
                                                 NodeIndex to, const OverrideMap& view = {}) {
  std::optional<BrutePath> best;
  std::vector<bool> visited(net.node_count(), false);
  std::vector<std::string> ids;
  std::function<void(NodeIndex, double)> dfs = [&](NodeIndex n, double cost) {
    if (n == to && !ids.empty()) {
      if (!best || cost < best->cost || (cost == best->cost && ids < best->edge_ids)) {
        best = BrutePath{cost, ids};
      }
      return;
    }
    visited[n] = true;
    for (EdgeIndex e : net.outgoing(n)) {
      const NodeIndex m = net.target(e);
      const double w = effective_travel_time(net, e, view);
      if (visited[m] || w == kInfiniteTime) continue;
      ids.push_back(net.edge(e).id);
      dfs(m, cost + w);
      ids.pop_back();
    }
    visited[n] = false;
  };
  if (from != to) dfs(from, 0.0);
  return best;
}

/// Breakdown pseudocode run as an event-queue program: returns the
/// (time, is_start) sequence of handled messages.
inline std::vector<std::pair<double, bool>> breakdown_oracle(int breakdown_count, double start,
                                                             double duration, double interval,
                                                             double t0 = 0.0) {
  using Event = std::tuple<double, std::uint64_t, bool>;  // time, order, start message
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
  std::uint64_t order = 0;
  std::vector<std::pair<double, bool>> handled;
  auto schedule_at = [&](double t, bool start_msg) { queue.emplace(t, order++, start_msg); };

  // initialize()
  if (breakdown_count > 0) schedule_at(t0 + start, true);
  // handleWarningMsg() for every delivered self-message
  while (!queue.empty()) {
    const auto [now, unused, start_msg] = queue.top();
    queue.pop();
    handled.emplace_back(now, start_msg);
    if (start_msg) {
      schedule_at(now + duration, false);
      breakdown_count--;
    } else if (breakdown_count > 0) {
      schedule_at(now + interval, true);
    }
  }
  return handled;
}

/// Puts a vehicle directly on the road, bypassing demand and insertion.
inline VehicleState& place(World& w, VehicleId id, const std::vector<std::string>& route_ids,
                           double pos, double speed = 0.0, int lane = 0,
                           VehicleClass cls = VehicleClass::passenger()) {
  VehicleState v;
  v.id = id;
  v.cls = cls;
  for (const std::string& e : route_ids) v.route.edges.push_back(w.network.edge_index(e));
  v.route.origin = w.network.source(v.route.edges.front());
  v.route.destination = w.network.target(v.route.edges.back());
  v.pos = pos;
  v.speed = speed;
  v.lane = lane;
  v.depart_time = w.time;
  v.driver = Rng(derive_seed(w.seed, "driver", static_cast<std::uint64_t>(id)));
  ++w.counters.inserted;
  return w.vehicles.insert_or_assign(id, std::move(v)).first->second;
}

inline World empty_world(RoadNetwork net, TrafficParams params = {}, std::uint64_t seed = 1) {
  return make_world(std::move(net), DemandSpec{}, params, seed);
}

}  // namespace cvr::test
