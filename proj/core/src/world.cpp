#include "cvr/world.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>
#include <utility>

#include "cvr/car_following.hpp"
#include "cvr/error.hpp"
#include "cvr/routing.hpp"

namespace cvr {
namespace {

constexpr double kEps = 1e-9;
constexpr double kStandstill = 0.1;  // m/s
constexpr double kInf = std::numeric_limits<double>::infinity();

bool ordered_before(const VehicleState& a, double pos, VehicleId id) {
  return std::tie(a.pos, a.id) < std::tie(pos, id);
}

// Vehicles on every edge lane, ordered by (pos, id). Rebuilt each step.
class LaneIndex {
 public:
  using Lane = std::vector<VehicleState*>;

  explicit LaneIndex(World& w) {
    lanes_.resize(w.network.edge_count());
    for (EdgeIndex e = 0; e < w.network.edge_count(); ++e) {
      lanes_[e].resize(static_cast<std::size_t>(w.network.edge(e).lane_count));
    }
    for (auto& [id, v] : w.vehicles)
      lanes_[v.edge()][static_cast<std::size_t>(v.lane)].push_back(&v);
    for (auto& edge_lanes : lanes_) {
      for (Lane& lane : edge_lanes) {
        std::sort(lane.begin(), lane.end(), [](const VehicleState* a, const VehicleState* b) {
          return ordered_before(*a, b->pos, b->id);
        });
      }
    }
  }

  const Lane& lane(EdgeIndex e, int l) const { return lanes_[e][static_cast<std::size_t>(l)]; }

  /// First vehicle strictly after (v.pos, v.id) in lane `l` of v's edge.
  VehicleState* ahead(const VehicleState& v, int l) const {
    const Lane& lane = this->lane(v.edge(), l);
    auto it = std::upper_bound(lane.begin(), lane.end(), &v,
                               [](const VehicleState* key, const VehicleState* x) {
                                 return ordered_before(*key, x->pos, x->id);
                               });
    return it == lane.end() ? nullptr : *it;
  }

  /// Last vehicle strictly before (v.pos, v.id) in lane `l` of v's edge.
  VehicleState* behind(const VehicleState& v, int l) const {
    const Lane& lane = this->lane(v.edge(), l);
    auto it = std::lower_bound(lane.begin(), lane.end(), &v,
                               [](const VehicleState* x, const VehicleState* key) {
                                 return ordered_before(*x, key->pos, key->id);
                               });
    return it == lane.begin() ? nullptr : *std::prev(it);
  }

  void change_lane(VehicleState& v, int to) {
    Lane& from_lane = lanes_[v.edge()][static_cast<std::size_t>(v.lane)];
    from_lane.erase(std::find(from_lane.begin(), from_lane.end(), &v));
    Lane& to_lane = lanes_[v.edge()][static_cast<std::size_t>(to)];
    auto it = std::lower_bound(to_lane.begin(), to_lane.end(), &v,
                               [](const VehicleState* x, const VehicleState* key) {
                                 return ordered_before(*x, key->pos, key->id);
                               });
    to_lane.insert(it, &v);
  }

 private:
  std::vector<std::vector<Lane>> lanes_;
};

struct Approacher {
  double dist = 0.0;  // to the end of the current edge
  VehicleId id = 0;
  double length = 0.0;
  double speed = 0.0;
};

// Vehicles within the merge horizon, keyed by the (edge, lane) they will
// enter next, ordered by (dist, id).
using ApproachMap = std::map<std::pair<EdgeIndex, int>, std::vector<Approacher>>;

int entry_lane(const RoadNetwork& net, EdgeIndex next, int lane) {
  return std::min(lane, net.edge(next).lane_count - 1);
}

ApproachMap build_approach_map(const World& w) {
  ApproachMap map;
  for (const auto& [id, v] : w.vehicles) {
    if (v.mode == DriveMode::BrokenDown || v.on_last_edge()) continue;
    const double dist = w.network.edge(v.edge()).length - v.pos;
    if (dist > w.params.merge_horizon) continue;
    const EdgeIndex next = v.route.edges[v.route_index + 1];
    map[{next, entry_lane(w.network, next, v.lane)}].push_back({dist, v.id, v.cls.length, v.speed});
  }
  for (auto& [key, list] : map) {
    std::sort(list.begin(), list.end(), [](const Approacher& a, const Approacher& b) {
      return std::tie(a.dist, a.id) < std::tie(b.dist, b.id);
    });
  }
  return map;
}

struct Ahead {
  double speed = 0.0;
  double gap = 0.0;  // raw; may be negative across an edge boundary
};

struct Obstacles {
  std::optional<Ahead> nearest;   // what the driver follows
  std::optional<Ahead> physical;  // nearest vehicle it could actually hit
};

// Obstacles ahead of `v` as if it drove in lane `lane`: the next vehicle on
// that lane, else the tail of the lanes it will enter along its route. With
// `approach`, vehicles closer to the same merge point count as leaders too
// (zipper merge), though not as physical obstacles.
Obstacles find_ahead(const World& w, const LaneIndex& idx, const ApproachMap* approach,
                     const VehicleState& v, int lane) {
  Obstacles out;
  auto consider = [&](Ahead a, bool physical) {
    if (!out.nearest || a.gap < out.nearest->gap) out.nearest = a;
    if (physical && (!out.physical || a.gap < out.physical->gap)) out.physical = a;
  };
  const RoadNetwork& net = w.network;
  const double own_dist = net.edge(v.edge()).length - v.pos;

  if (approach != nullptr && !v.on_last_edge() && own_dist <= w.params.lookahead) {
    const EdgeIndex next = v.route.edges[v.route_index + 1];
    if (auto it = approach->find({next, entry_lane(net, next, lane)}); it != approach->end()) {
      const Approacher* closest = nullptr;
      for (const Approacher& a : it->second) {
        if (a.id != v.id && std::tie(a.dist, a.id) < std::tie(own_dist, v.id)) closest = &a;
      }
      if (closest != nullptr)
        consider({closest->speed, own_dist - closest->dist - closest->length}, false);
    }
  }

  if (const VehicleState* next = idx.ahead(v, lane)) {
    consider({next->speed, next->pos - next->cls.length - v.pos}, true);
    return out;
  }
  double dist = own_dist;
  int cur_lane = lane;
  for (std::size_t k = v.route_index + 1; k < v.route.edges.size() && dist <= w.params.lookahead;
       ++k) {
    const EdgeIndex e = v.route.edges[k];
    const int l = entry_lane(net, e, cur_lane);
    const auto& lane_vec = idx.lane(e, l);
    if (!lane_vec.empty()) {
      const VehicleState* tail = lane_vec.front();
      consider({tail->speed, dist + tail->pos - tail->cls.length}, true);
      break;
    }
    dist += net.edge(e).length;
    cur_lane = l;
  }
  return out;
}

// Highest speed from which a vehicle `dist` meters before an edge with speed
// `v_next` can brake at `b` per step and cross at no more than v_next + b*dt.
double braking_limit(double v_next, double dist, double b, double dt, double ceiling) {
  double best = v_next + b * dt;
  for (int n = 1; best < ceiling && n < 1000; ++n) {
    const double by_schedule = v_next + (n + 1) * b * dt;
    const double by_distance = (dist / dt + b * dt * n * (n - 1) / 2.0) / n;
    best = std::max(best, std::min(by_schedule, by_distance));
    if (by_distance < by_schedule) break;
  }
  return best;
}

double approach_limit(const World& w, const VehicleState& v, double cap) {
  if (v.on_last_edge()) return kInf;
  const EdgeIndex next = v.route.edges[v.route_index + 1];
  const double v_next = std::min(w.network.edge(next).speed_limit, v.cls.max_speed);
  if (v_next >= cap) return kInf;
  const double dist = w.network.edge(v.edge()).length - v.pos;
  return braking_limit(v_next, dist, v.cls.max_decel, w.params.dt, cap);
}

AdjacentLane adjacent_context(const World& w, const LaneIndex& idx, const VehicleState& v,
                              int target) {
  AdjacentLane ctx;
  if (auto front = find_ahead(w, idx, nullptr, v, target).physical) {
    ctx.front = LeaderInfo{front->speed, front->gap};
  }
  if (const VehicleState* rear = idx.behind(v, target)) {
    ctx.rear = RearNeighbor{rear->speed, v.pos - v.cls.length - rear->pos, rear->cls};
  }
  return ctx;
}

bool breakdown_ahead_on_route(const VehicleState& v, const BreakdownLocation& loc) {
  if (v.edge() == loc.edge) return v.pos <= loc.pos;
  for (std::size_t k = v.route_index + 1; k < v.route.edges.size(); ++k) {
    if (v.route.edges[k] == loc.edge) return true;
  }
  return false;
}

}  // namespace

VehicleState* World::find(VehicleId id) {
  auto it = vehicles.find(id);
  return it == vehicles.end() ? nullptr : &it->second;
}

const VehicleState* World::find(VehicleId id) const {
  auto it = vehicles.find(id);
  return it == vehicles.end() ? nullptr : &it->second;
}

World make_world(RoadNetwork network, DemandSpec demand, TrafficParams params, std::uint64_t seed) {
  if (!(params.dt > 0.0)) throw SimulationError("dt must be positive");
  if (!(params.caution_factor > 0.0 && params.caution_factor <= 1.0)) {
    throw SimulationError("caution factor must lie in (0, 1]");
  }
  validate_demand(demand, &network);

  World w;
  w.params = params;
  w.seed = seed;
  std::map<std::pair<NodeIndex, NodeIndex>, Route> cache;
  for (DemandEntry& entry : demand.schedule) {
    const NodeIndex from = network.node_index(entry.origin);
    const NodeIndex to = network.node_index(entry.destination);
    auto cached = cache.find({from, to});
    if (cached == cache.end()) {
      auto path = shortest_path(network, from, to);
      if (!path) {
        throw NetworkError(fmt::format("vehicle {}: no route from {} to {}", entry.id, entry.origin,
                                       entry.destination));
      }
      cached = cache.emplace(std::make_pair(from, to), path->route).first;
    }
    w.pending.push_back({std::move(entry), cached->second});
  }
  w.network = std::move(network);
  return w;
}

double speed_cap(const World& world, const VehicleState& v) {
  double cap = std::min(v.cls.max_speed, world.network.edge(v.edge()).speed_limit);
  if (v.mode == DriveMode::Caution) cap *= world.params.caution_factor;
  return cap;
}

std::vector<VehicleId> spawn_step(World& w, double t) {
  std::vector<VehicleId> inserted;
  std::set<EdgeIndex> deferred_edges;  // keep FIFO order per origin edge
  for (auto it = w.pending.begin(); it != w.pending.end() && it->entry.depart <= t + kEps;) {
    const EdgeIndex first = it->route.edges.front();
    if (deferred_edges.count(first) != 0) {
      ++it;
      continue;
    }
    const Edge& edge = w.network.edge(first);
    const VehicleClass cls = VehicleClass::of(it->entry.kind);

    std::vector<const VehicleState*> tails(static_cast<std::size_t>(edge.lane_count), nullptr);
    for (const auto& [id, v] : w.vehicles) {
      if (v.edge() != first) continue;
      const VehicleState*& tail = tails[static_cast<std::size_t>(v.lane)];
      if (tail == nullptr || ordered_before(v, tail->pos, tail->id)) tail = &v;
    }
    int lane = 0;
    double room = -kInf;
    for (int l = 0; l < edge.lane_count; ++l) {
      const VehicleState* tail = tails[static_cast<std::size_t>(l)];
      const double r = tail == nullptr ? kInf : tail->pos - tail->cls.length;
      if (r > room) {
        room = r;
        lane = l;
      }
    }
    if (room < cls.min_gap) {
      deferred_edges.insert(first);
      ++it;
      continue;
    }

    VehicleState v;
    v.id = it->entry.id;
    v.cls = cls;
    v.route = it->route;
    v.lane = lane;
    v.speed = std::min(edge.speed_limit, cls.max_speed);
    if (const VehicleState* tail = tails[static_cast<std::size_t>(lane)]) {
      v.speed = std::min(v.speed, safe_speed(tail->speed, room - cls.min_gap, v.speed,
                                             cls.max_decel, w.params.dt));
    }
    v.depart_time = t;
    v.driver = Rng(derive_seed(w.seed, "driver", static_cast<std::uint64_t>(v.id)));
    w.counters.insertion_delay += t - it->entry.depart;
    ++w.counters.inserted;
    inserted.push_back(v.id);
    w.vehicles.emplace(v.id, std::move(v));
    it = w.pending.erase(it);
  }
  return inserted;
}

void advance_world(World& w) {
  const double dt = w.params.dt;
  const RoadNetwork& net = w.network;
  LaneIndex idx(w);

  // Lane changes, applied one at a time so two vehicles cannot claim the
  // same gap.
  for (auto& [id, v] : w.vehicles) {
    if (v.mode == DriveMode::BrokenDown) continue;
    const int lanes = net.edge(v.edge()).lane_count;
    if (lanes < 2) continue;
    auto ahead = find_ahead(w, idx, nullptr, v, v.lane).physical;
    if (!ahead) continue;
    const LeaderInfo leader{ahead->speed, std::max(0.0, ahead->gap)};
    const double desired = speed_cap(w, v);
    for (int target : {v.lane + 1, v.lane - 1}) {
      if (target < 0 || target >= lanes) continue;
      if (lane_change_decide(v, leader, adjacent_context(w, idx, v, target), dt, desired) ==
          LaneDecision::Change) {
        idx.change_lane(v, target);
        v.lane = target;
        ++w.counters.lane_changes;
        break;
      }
    }
  }

  const ApproachMap approach = build_approach_map(w);

  struct Plan {
    VehicleState* v;
    double old_speed;
    double old_pos;
    double speed;
  };
  std::vector<Plan> plans;
  plans.reserve(w.vehicles.size());
  for (auto& [id, v] : w.vehicles) {
    Plan plan{&v, v.speed, v.pos, 0.0};
    if (v.mode != DriveMode::BrokenDown) {
      const Obstacles ahead = find_ahead(w, idx, &approach, v, v.lane);
      std::optional<LeaderInfo> leader;
      if (ahead.nearest)
        leader = LeaderInfo{ahead.nearest->speed, std::max(0.0, ahead.nearest->gap)};
      const double cap = speed_cap(w, v);
      double next = krauss_step(v, leader, dt, v.driver, std::min(cap, approach_limit(w, v, cap)));
      const double comfortable_floor = std::max(0.0, v.speed - v.cls.max_decel * dt);
      next = std::max(next, comfortable_floor);
      if (ahead.physical) {
        const double room = std::max(0.0, ahead.physical->gap);
        if (next * dt > room) {
          next = room / dt;
          if (next < comfortable_floor - kEps) ++w.counters.emergency_brakes;
        }
      }
      plan.speed = next;
    }
    plans.push_back(plan);
  }

  w.last_motion.clear();
  std::vector<Plan*> crossers;
  std::vector<VehicleId> arrivals;
  for (Plan& p : plans) {
    VehicleState& v = *p.v;
    const double target = v.pos + p.speed * dt;
    const double length = net.edge(v.edge()).length;
    if (target > length || (v.on_last_edge() && target >= length)) {
      crossers.push_back(&p);
      continue;
    }
    if (target > v.pos) w.last_motion.push_back({v.id, v.edge(), v.pos, target, false, p.speed});
    v.pos = target;
    v.speed = p.speed;
  }

  // Rear bumper of the last vehicle per edge lane after the non-crossing moves.
  std::map<std::pair<EdgeIndex, int>, double> tail_back;
  auto note_tail = [&](const VehicleState& v) {
    const double back = v.pos - v.cls.length;
    auto [it, fresh] = tail_back.try_emplace({v.edge(), v.lane}, back);
    if (!fresh) it->second = std::min(it->second, back);
  };
  {
    std::set<const VehicleState*> moving_on;
    for (const Plan* p : crossers) moving_on.insert(p->v);
    for (const Plan& p : plans) {
      if (moving_on.count(p.v) == 0) note_tail(*p.v);
    }
  }

  std::sort(crossers.begin(), crossers.end(), [&](const Plan* a, const Plan* b) {
    const double oa = a->old_pos + a->speed * dt - net.edge(a->v->edge()).length;
    const double ob = b->old_pos + b->speed * dt - net.edge(b->v->edge()).length;
    if (oa != ob) return oa > ob;
    return a->v->id < b->v->id;
  });

  for (Plan* p : crossers) {
    VehicleState& v = *p->v;
    double remaining = v.pos + p->speed * dt - net.edge(v.edge()).length;
    double travelled = net.edge(v.edge()).length - v.pos;
    w.last_motion.push_back({v.id, v.edge(), v.pos, net.edge(v.edge()).length, false, p->speed});
    v.pos = net.edge(v.edge()).length;
    bool arrived = false;
    bool blocked = false;
    while (true) {
      if (v.on_last_edge()) {
        arrived = true;
        break;
      }
      const EdgeIndex next = v.route.edges[v.route_index + 1];
      const int lane = entry_lane(net, next, v.lane);
      auto tail = tail_back.find({next, lane});
      const double room = tail == tail_back.end() ? kInf : tail->second;
      if (remaining > room) {
        ++w.counters.entry_blocks;
        blocked = true;
        if (room >= 0.0) {
          v.route_index += 1;
          v.lane = lane;
          v.pos = room;
          travelled += room;
          if (room > 0.0) w.last_motion.push_back({v.id, next, 0.0, room, true, 0.0});
        } else {
          // The tail still overhangs the junction; stop short of it.
          const double stop_at = std::max(p->old_pos, net.edge(v.edge()).length + room);
          if (v.edge() == v.route.edges[v.route_index] && stop_at < v.pos) {
            travelled -= v.pos - stop_at;
            if (!w.last_motion.empty() && w.last_motion.back().vehicle == v.id) {
              w.last_motion.back().to = stop_at;
            }
            v.pos = stop_at;
          }
        }
        break;
      }
      v.route_index += 1;
      v.lane = lane;
      const double next_length = net.edge(next).length;
      if (remaining > next_length || (v.on_last_edge() && remaining >= next_length)) {
        w.last_motion.push_back({v.id, next, 0.0, next_length, true, p->speed});
        v.pos = next_length;
        travelled += next_length;
        remaining -= next_length;
        continue;
      }
      w.last_motion.push_back({v.id, next, 0.0, remaining, true, p->speed});
      v.pos = remaining;
      travelled += remaining;
      break;
    }
    if (blocked) {
      v.speed = std::max(0.0, travelled / dt);
      for (MotionSegment& seg : w.last_motion) {
        if (seg.vehicle == v.id) seg.speed = v.speed;
      }
      if (v.speed < std::max(0.0, p->old_speed - v.cls.max_decel * dt) - kEps) {
        ++w.counters.emergency_brakes;
      }
    } else {
      v.speed = p->speed;
    }
    if (arrived) {
      arrivals.push_back(v.id);
    } else {
      note_tail(v);
    }
  }

  const double t_next = w.time + dt;
  for (const Plan& p : plans) {
    VehicleState& v = *p.v;
    v.accel = (v.speed - p.old_speed) / dt;
    if (v.speed < kStandstill && v.mode != DriveMode::BrokenDown) {
      if (v.slow_since < 0.0) v.slow_since = t_next;
    } else {
      v.slow_since = -1.0;
    }
    if (v.mode == DriveMode::Caution && v.caution_for &&
        !breakdown_ahead_on_route(v, *v.caution_for)) {
      v.mode = DriveMode::Normal;
      v.caution_for.reset();
    }
  }

  for (VehicleId id : arrivals) {
    auto node = w.vehicles.extract(id);
    node.mapped().arrive_time = t_next;
    w.arrived.push_back(std::move(node.mapped()));
    ++w.counters.arrived;
  }
  w.time = t_next;
}

double min_same_lane_gap(const World& w) {
  std::map<std::pair<EdgeIndex, int>, std::vector<const VehicleState*>> lanes;
  for (const auto& [id, v] : w.vehicles) lanes[{v.edge(), v.lane}].push_back(&v);
  double best = kInf;
  for (auto& [key, list] : lanes) {
    std::sort(list.begin(), list.end(), [](const VehicleState* a, const VehicleState* b) {
      return ordered_before(*a, b->pos, b->id);
    });
    for (std::size_t i = 0; i + 1 < list.size(); ++i) {
      best = std::min(best, list[i + 1]->pos - list[i + 1]->cls.length - list[i]->pos);
    }
  }
  return best;
}

}  // namespace cvr
