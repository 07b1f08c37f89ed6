#include "cvr/network.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "cvr/error.hpp"

namespace cvr {
namespace {

// Ids are written unquoted in the text format.
bool valid_id(std::string_view id) {
  return !id.empty() && id.find_first_of(" \t\r\n#") == std::string_view::npos;
}

}  // namespace

TravelTimeOverride TravelTimeOverride::seconds(double s) {
  if (!std::isfinite(s) || s < 0.0) {
    throw Error(fmt::format("travel time override must be finite and >= 0, got {}", s));
  }
  return TravelTimeOverride(s);
}

std::string TravelTimeOverride::to_string() const {
  return is_blocked() ? std::string("blocked") : fmt::format("{}", seconds_);
}

TravelTimeOverride TravelTimeOverride::parse(std::string_view text) {
  if (text == "blocked") return blocked();
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(fmt::format("invalid travel time override '{}'", text));
  }
  return seconds(value);
}

RoadNetwork RoadNetwork::build(std::vector<Node> nodes, std::vector<Edge> edges) {
  RoadNetwork net;
  for (NodeIndex i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (!valid_id(n.id)) throw NetworkError(fmt::format("node #{}: invalid id '{}'", i, n.id));
    if (!std::isfinite(n.x) || !std::isfinite(n.y)) {
      throw NetworkError(fmt::format("node {}: coordinates must be finite", n.id));
    }
    if (!net.node_lookup_.emplace(n.id, i).second) {
      throw NetworkError(fmt::format("duplicate node id {}", n.id));
    }
  }
  net.out_.resize(nodes.size());
  net.in_.resize(nodes.size());

  for (EdgeIndex i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (!valid_id(e.id)) throw NetworkError(fmt::format("edge #{}: invalid id '{}'", i, e.id));
    if (!net.edge_lookup_.emplace(e.id, i).second) {
      throw NetworkError(fmt::format("duplicate edge id {}", e.id));
    }
    auto from = net.node_lookup_.find(e.from);
    if (from == net.node_lookup_.end()) {
      throw NetworkError(fmt::format("edge {}: dangling endpoint {}", e.id, e.from));
    }
    auto to = net.node_lookup_.find(e.to);
    if (to == net.node_lookup_.end()) {
      throw NetworkError(fmt::format("edge {}: dangling endpoint {}", e.id, e.to));
    }
    if (from->second == to->second) {
      throw NetworkError(fmt::format("edge {}: from and to are both {}", e.id, e.from));
    }
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      throw NetworkError(fmt::format("edge {}: nonpositive length {}", e.id, e.length));
    }
    if (!(e.speed_limit > 0.0) || !std::isfinite(e.speed_limit)) {
      throw NetworkError(fmt::format("edge {}: nonpositive speed limit {}", e.id, e.speed_limit));
    }
    if (e.lane_count < 1) {
      throw NetworkError(fmt::format("edge {}: lane count {} < 1", e.id, e.lane_count));
    }
    net.edge_from_.push_back(from->second);
    net.edge_to_.push_back(to->second);
    net.out_[from->second].push_back(i);
    net.in_[to->second].push_back(i);
  }

  std::vector<EdgeIndex> order(edges.size());
  std::iota(order.begin(), order.end(), EdgeIndex{0});
  std::sort(order.begin(), order.end(),
            [&](EdgeIndex a, EdgeIndex b) { return edges[a].id < edges[b].id; });
  net.rank_.resize(edges.size());
  for (std::size_t r = 0; r < order.size(); ++r) net.rank_[order[r]] = r;

  net.nodes_ = std::move(nodes);
  net.edges_ = std::move(edges);
  return net;
}

std::optional<NodeIndex> RoadNetwork::find_node(std::string_view id) const {
  auto it = node_lookup_.find(id);
  if (it == node_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeIndex> RoadNetwork::find_edge(std::string_view id) const {
  auto it = edge_lookup_.find(id);
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

NodeIndex RoadNetwork::node_index(std::string_view id) const {
  if (auto n = find_node(id)) return *n;
  throw NetworkError(fmt::format("unknown node {}", id));
}

EdgeIndex RoadNetwork::edge_index(std::string_view id) const {
  if (auto e = find_edge(id)) return *e;
  throw NetworkError(fmt::format("unknown edge {}", id));
}

double RoadNetwork::free_flow_time(EdgeIndex e) const {
  const Edge& edge = edges_.at(e);
  return edge.length / edge.speed_limit;
}

Point RoadNetwork::position_on_edge(EdgeIndex e, double pos) const {
  const Node& a = nodes_[edge_from_.at(e)];
  const Node& b = nodes_[edge_to_[e]];
  const double length = edges_[e].length;
  const double p = std::clamp(pos, 0.0, length);
  // Scale before dividing so whole-meter positions on axis-aligned edges stay exact.
  return {a.x + (b.x - a.x) * p / length, a.y + (b.y - a.y) * p / length};
}

void RoadNetwork::set_override(EdgeIndex e, TravelTimeOverride value) {
  if (e >= edges_.size()) throw NetworkError(fmt::format("unknown edge index {}", e));
  overrides_.insert_or_assign(e, value);
}

void RoadNetwork::clear_override(EdgeIndex e) { overrides_.erase(e); }

double effective_travel_time(const RoadNetwork& net, EdgeIndex e, const OverrideMap& view) {
  if (e >= net.edge_count()) throw NetworkError(fmt::format("unknown edge index {}", e));
  if (auto it = view.find(e); it != view.end()) return it->second.weight();
  if (auto it = net.overrides().find(e); it != net.overrides().end()) return it->second.weight();
  return net.free_flow_time(e);
}

double effective_travel_time(const RoadNetwork& net, std::string_view edge_id,
                             const OverrideMap& view) {
  return effective_travel_time(net, net.edge_index(edge_id), view);
}

void check_route(const RoadNetwork& net, const Route& route) {
  if (route.edges.empty()) throw NetworkError("route is empty");
  if (net.source(route.edges.front()) != route.origin) {
    throw NetworkError(
        fmt::format("route does not depart its origin {}", net.node(route.origin).id));
  }
  for (std::size_t k = 0; k + 1 < route.edges.size(); ++k) {
    if (net.target(route.edges[k]) != net.source(route.edges[k + 1])) {
      throw NetworkError(fmt::format("route broken between {} and {}", net.edge(route.edges[k]).id,
                                     net.edge(route.edges[k + 1]).id));
    }
  }
  if (net.target(route.edges.back()) != route.destination) {
    throw NetworkError(
        fmt::format("route does not arrive at its destination {}", net.node(route.destination).id));
  }
}

std::vector<std::string> route_edge_ids(const RoadNetwork& net, const Route& route) {
  std::vector<std::string> ids;
  ids.reserve(route.edges.size());
  for (EdgeIndex e : route.edges) ids.push_back(net.edge(e).id);
  return ids;
}

}  // namespace cvr
