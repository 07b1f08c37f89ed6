#include "cvr/routing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "cvr/error.hpp"

namespace cvr {
namespace {

// Dijkstra over composite labels (cost, edge-rank sequence). Extending a
// label by an edge never makes it smaller and preserves the order between
// labels ending at the same node, so settling the smallest label first
// yields the lexicographic tie-break directly.
struct Label {
  double cost = kInfiniteTime;
  std::vector<std::uint32_t> ranks;
  std::vector<EdgeIndex> edges;
};

bool label_less(const Label& a, const Label& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  return a.ranks < b.ranks;
}

struct QueueEntry {
  Label label;
  NodeIndex node;
};

struct QueueOrder {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (label_less(b.label, a.label)) return true;
    if (label_less(a.label, b.label)) return false;
    return a.node > b.node;
  }
};

}  // namespace

std::optional<PathResult> shortest_path(const RoadNetwork& net, NodeIndex from, NodeIndex to,
                                        const OverrideMap& view) {
  if (from >= net.node_count() || to >= net.node_count()) {
    throw NetworkError("shortest_path: node index out of range");
  }
  if (from == to) return std::nullopt;

  std::vector<Label> best(net.node_count());
  std::vector<bool> settled(net.node_count(), false);
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> queue;

  best[from].cost = 0.0;
  queue.push({best[from], from});

  while (!queue.empty()) {
    QueueEntry top = queue.top();
    queue.pop();
    NodeIndex u = top.node;
    if (settled[u]) continue;
    settled[u] = true;
    if (u == to) break;

    for (EdgeIndex e : net.outgoing(u)) {
      double w = effective_travel_time(net, e, view);
      if (!std::isfinite(w)) continue;
      NodeIndex v = net.target(e);
      if (settled[v]) continue;
      Label candidate;
      candidate.cost = top.label.cost + w;
      candidate.ranks = top.label.ranks;
      candidate.ranks.push_back(static_cast<std::uint32_t>(net.edge_rank(e)));
      if (!label_less(candidate, best[v])) continue;
      candidate.edges = top.label.edges;
      candidate.edges.push_back(e);
      best[v] = candidate;
      queue.push({std::move(candidate), v});
    }
  }

  if (!settled[to]) return std::nullopt;
  PathResult result;
  result.route.edges = std::move(best[to].edges);
  result.route.origin = from;
  result.route.destination = to;
  result.cost = best[to].cost;
  return result;
}

std::optional<PathResult> shortest_path(const RoadNetwork& net, std::string_view from,
                                        std::string_view to, const OverrideMap& view) {
  return shortest_path(net, net.node_index(from), net.node_index(to), view);
}

double route_cost(const RoadNetwork& net, const Route& route, const OverrideMap& view) {
  double total = 0.0;
  for (EdgeIndex e : route.edges) total += effective_travel_time(net, e, view);
  return total;
}

}  // namespace cvr
