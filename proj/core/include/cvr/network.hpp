#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cvr {

using NodeIndex = std::size_t;
using EdgeIndex = std::size_t;

inline constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Node {
  std::string id;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  std::string id;
  std::string from;
  std::string to;
  double length = 0.0;       // m
  double speed_limit = 0.0;  // m/s
  int lane_count = 1;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Travel time forced onto an edge, either a finite number of seconds or
/// "blocked" (routing treats the edge as impassable).
class TravelTimeOverride {
 public:
  static TravelTimeOverride blocked() { return TravelTimeOverride(kInfiniteTime); }
  /// Throws cvr::Error when `s` is negative or not finite.
  static TravelTimeOverride seconds(double s);

  bool is_blocked() const { return seconds_ == kInfiniteTime; }
  /// Routing weight in seconds; +inf when blocked.
  double weight() const { return seconds_; }

  std::string to_string() const;
  /// Parses "blocked" or a nonnegative number of seconds.
  static TravelTimeOverride parse(std::string_view text);

  friend bool operator==(const TravelTimeOverride&, const TravelTimeOverride&) = default;

 private:
  explicit TravelTimeOverride(double s) : seconds_(s) {}
  double seconds_;
};

using OverrideMap = std::map<EdgeIndex, TravelTimeOverride>;

/// Ordered edge sequence from `origin` to `destination`. Consecutive edges
/// share endpoints.
struct Route {
  std::vector<EdgeIndex> edges;
  NodeIndex origin = 0;
  NodeIndex destination = 0;

  friend bool operator==(const Route&, const Route&) = default;
};

class RoadNetwork {
 public:
  RoadNetwork() = default;

  /// Validates the records and builds adjacency. Throws cvr::NetworkError
  /// naming the offending record on duplicate ids, dangling endpoints,
  /// self loops, nonpositive length/speed or a lane count below one.
  static RoadNetwork build(std::vector<Node> nodes, std::vector<Edge> edges);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const Node& node(NodeIndex n) const { return nodes_.at(n); }
  const Edge& edge(EdgeIndex e) const { return edges_.at(e); }

  std::optional<NodeIndex> find_node(std::string_view id) const;
  std::optional<EdgeIndex> find_edge(std::string_view id) const;
  /// Like find_*, but throws cvr::NetworkError for unknown ids.
  NodeIndex node_index(std::string_view id) const;
  EdgeIndex edge_index(std::string_view id) const;

  NodeIndex source(EdgeIndex e) const { return edge_from_.at(e); }
  NodeIndex target(EdgeIndex e) const { return edge_to_.at(e); }
  const std::vector<EdgeIndex>& outgoing(NodeIndex n) const { return out_.at(n); }
  const std::vector<EdgeIndex>& incoming(NodeIndex n) const { return in_.at(n); }

  /// Position of `e` when all edges are sorted by id; used for tie-breaks.
  std::size_t edge_rank(EdgeIndex e) const { return rank_.at(e); }

  /// length / speed_limit, ignoring overrides.
  double free_flow_time(EdgeIndex e) const;

  /// Planar coordinates of a point `pos` meters along `e`, interpolated
  /// linearly between the endpoint nodes.
  Point position_on_edge(EdgeIndex e, double pos) const;

  const OverrideMap& overrides() const { return overrides_; }
  void set_override(EdgeIndex e, TravelTimeOverride value);
  void clear_override(EdgeIndex e);

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::map<std::string, NodeIndex, std::less<>> node_lookup_;
  std::map<std::string, EdgeIndex, std::less<>> edge_lookup_;
  std::vector<NodeIndex> edge_from_;
  std::vector<NodeIndex> edge_to_;
  std::vector<std::vector<EdgeIndex>> out_;
  std::vector<std::vector<EdgeIndex>> in_;
  std::vector<std::size_t> rank_;
  OverrideMap overrides_;
};

inline RoadNetwork build_network(std::vector<Node> nodes, std::vector<Edge> edges) {
  return RoadNetwork::build(std::move(nodes), std::move(edges));
}

/// Travel time of an edge in seconds. A per-vehicle `view` override wins
/// over a network-wide override, which wins over free flow. Blocked edges
/// report +inf.
double effective_travel_time(const RoadNetwork& net, EdgeIndex e, const OverrideMap& view = {});
/// Throws cvr::NetworkError for an unknown edge id.
double effective_travel_time(const RoadNetwork& net, std::string_view edge_id,
                             const OverrideMap& view = {});

/// Throws cvr::NetworkError unless `route` is nonempty, connected and runs
/// from its origin to its destination.
void check_route(const RoadNetwork& net, const Route& route);

std::vector<std::string> route_edge_ids(const RoadNetwork& net, const Route& route);

}  // namespace cvr
