#include "cvr/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <set>

#include "cvr/error.hpp"

namespace cvr {

double free_flow_time(const Route& route, const RoadNetwork& net, const VehicleClass& cls) {
  double total = 0.0;
  for (EdgeIndex e : route.edges) {
    const Edge& edge = net.edge(e);
    total += edge.length / std::min(edge.speed_limit, cls.max_speed);
  }
  return total;
}

JourneyRecord make_journey(const VehicleState& v, const RoadNetwork& net) {
  if (!v.arrive_time) throw SimulationError(fmt::format("vehicle {} has not arrived", v.id));
  JourneyRecord r;
  r.vehicle = v.id;
  r.kind = v.cls.kind;
  r.depart = v.depart_time;
  r.arrive = *v.arrive_time;
  r.journey_time = r.arrive - r.depart;
  r.free_flow_time = free_flow_time(v.route, net, v.cls);
  r.delay = r.journey_time - r.free_flow_time;
  r.rerouted = v.rerouted;
  return r;
}

DecelStats decel_stats(const std::vector<double>& accels) {
  DecelStats s;
  double sum = 0.0;
  for (double a : accels) {
    if (a < 0.0) {
      sum += -a;
      ++s.count;
    }
  }
  if (s.count == 0) return s;
  s.mean = sum / static_cast<double>(s.count);
  double sq = 0.0;
  for (double a : accels) {
    if (a < 0.0) {
      const double d = -a - s.mean;
      sq += d * d;
    }
  }
  s.variance = sq / static_cast<double>(s.count);
  return s;
}

DetectorBank::DetectorBank(const RoadNetwork& net, std::vector<DetectorSpec> specs)
    : specs_(std::move(specs)) {
  std::set<std::string> ids;
  for (const DetectorSpec& d : specs_) {
    if (!ids.insert(d.id).second) throw ConfigError(fmt::format("duplicate detector {}", d.id));
    auto e = net.find_edge(d.edge);
    if (!e) throw ConfigError(fmt::format("detector {}: unknown edge {}", d.id, d.edge));
    if (!(d.pos > 0.0) || d.pos > net.edge(*e).length) {
      throw ConfigError(fmt::format("detector {}: position {} outside edge {} (0, {}]", d.id, d.pos,
                                    d.edge, net.edge(*e).length));
    }
    edges_.push_back(*e);
    counts_[d.id] = 0;
  }
}

void DetectorBank::step(const World& world) {
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const std::size_t first = hits_.size();
    for (const MotionSegment& seg : world.last_motion) {
      if (seg.edge != edges_[i] || !(seg.from < specs_[i].pos && specs_[i].pos <= seg.to)) continue;
      hits_.push_back({specs_[i].id, world.time, seg.vehicle, seg.speed});
      ++counts_[specs_[i].id];
    }
    std::sort(hits_.begin() + static_cast<std::ptrdiff_t>(first), hits_.end(),
              [](const DetectorHit& a, const DetectorHit& b) { return a.vehicle < b.vehicle; });
  }
}

std::uint64_t DetectorBank::count(const std::string& id) const {
  auto it = counts_.find(id);
  return it == counts_.end() ? 0 : it->second;
}

}  // namespace cvr
