#include "cvr/v2x.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "cvr/error.hpp"

namespace cvr {

void CommConfig::validate() const {
  if (!(beacon_interval > 0.0) || !std::isfinite(beacon_interval)) {
    throw ConfigError(
        fmt::format("comm.beacon_interval_s must be positive, got {}", beacon_interval));
  }
  if (!(range > 0.0) || !std::isfinite(range)) {
    throw ConfigError(fmt::format("comm.range_m must be positive, got {}", range));
  }
  if (packet_size <= 0) {
    throw ConfigError(fmt::format("comm.packet_size_bytes must be positive, got {}", packet_size));
  }
  if (max_hops < 0) throw ConfigError(fmt::format("comm.max_hops must be >= 0, got {}", max_hops));
}

std::string_view to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::Beacon:
      return "beacon";
    case MessageKind::BreakdownWarning:
      return "warning";
    case MessageKind::BreakdownResolved:
      return "resolved";
  }
  return "?";
}

bool in_range(Point a, Point b, double range) { return std::hypot(a.x - b.x, a.y - b.y) <= range; }

V2xLayer::V2xLayer(CommConfig config) : config_(config) { config_.validate(); }

V2xLayer::Cell V2xLayer::cell_of(Point p) const {
  return {static_cast<long long>(std::floor(p.x / config_.range)),
          static_cast<long long>(std::floor(p.y / config_.range))};
}

void V2xLayer::begin_step(const World& world) {
  time_ = world.time;
  positions_.clear();
  grid_.clear();
  for (const auto& [id, v] : world.vehicles) {
    const Point p = world.position(v);
    positions_.emplace(id, p);
    grid_[cell_of(p)].push_back(id);
  }
}

const Point* V2xLayer::snapshot_position(VehicleId id) const {
  auto it = positions_.find(id);
  return it == positions_.end() ? nullptr : &it->second;
}

std::vector<VehicleId> V2xLayer::broadcast(const World& world, VehicleId sender,
                                           const V2xMessage& message) {
  if (world.find(sender) == nullptr) {
    throw SimulationError(fmt::format("broadcast from unknown vehicle {}", sender));
  }
  const Point* origin = snapshot_position(sender);
  if (origin == nullptr) {
    throw SimulationError(fmt::format("vehicle {} is not in the step snapshot", sender));
  }
  ++stats_.broadcasts;

  std::vector<VehicleId> receivers;
  const Cell c = cell_of(*origin);
  for (long long dx = -1; dx <= 1; ++dx) {
    for (long long dy = -1; dy <= 1; ++dy) {
      auto it = grid_.find({c.x + dx, c.y + dy});
      if (it == grid_.end()) continue;
      for (VehicleId id : it->second) {
        if (id != sender && in_range(*origin, positions_.at(id), config_.range)) {
          receivers.push_back(id);
        }
      }
    }
  }
  std::sort(receivers.begin(), receivers.end());

  V2xMessage copy = message;
  copy.hop_count = message.hop_count + 1;
  for (VehicleId id : receivers) {
    inboxes_[id].messages.push_back(copy);
    ++stats_.deliveries;
    if (copy.kind != MessageKind::Beacon || config_.log_beacons) {
      log_.push_back({time_, copy.kind, copy.origin, copy.seq, sender, id, copy.hop_count});
    }
  }
  return receivers;
}

std::vector<VehicleId> V2xLayer::originate(const World& world, VehicleId origin, MessageKind kind,
                                           std::optional<BreakdownLocation> breakdown) {
  const VehicleState* v = world.find(origin);
  if (v == nullptr) throw SimulationError(fmt::format("broadcast from unknown vehicle {}", origin));
  V2xMessage msg;
  msg.kind = kind;
  msg.origin = origin;
  msg.seq = next_seq_[{origin, kind}]++;
  msg.sent_at = time_;
  if (const Point* p = snapshot_position(origin)) msg.sender_position = *p;
  msg.breakdown = breakdown;
  msg.kinematics = {v->edge(), v->pos, v->speed, v->accel, v->cls.kind};
  msg.hop_count = 0;
  if (is_relayed(kind)) inboxes_[origin].seen.insert(msg.key());
  return broadcast(world, origin, msg);
}

void V2xLayer::beacon_step(const World& world, double t) {
  for (const auto& [id, v] : world.vehicles) {
    const double phase = (t - v.depart_time) / config_.beacon_interval;
    if (phase < -1e-9 || std::abs(phase - std::round(phase)) > 1e-9) continue;
    originate(world, id, MessageKind::Beacon);
  }
}

void V2xLayer::relay_step(const World& world, const Handler& handler) {
  auto relays = std::move(pending_relays_);
  pending_relays_.clear();
  for (auto& [sender, msg] : relays) {
    if (world.find(sender) == nullptr || snapshot_position(sender) == nullptr) continue;
    msg.sender_position = *snapshot_position(sender);
    ++stats_.relays;
    broadcast(world, sender, msg);
  }

  for (auto& [id, inbox] : inboxes_) {
    if (inbox.messages.empty()) continue;
    auto messages = std::move(inbox.messages);
    inbox.messages.clear();
    for (const V2xMessage& msg : messages) {
      if (!is_relayed(msg.kind)) continue;
      if (!inbox.seen.insert(msg.key()).second) continue;
      if (config_.max_hops == 0 || msg.hop_count < config_.max_hops) {
        pending_relays_.emplace_back(id, msg);
      }
      if (!handled_.emplace(id, msg.key()).second) {
        ++stats_.duplicate_handler_calls;
        continue;
      }
      ++stats_.handler_calls;
      if (handler) handler(id, msg);
    }
  }
}

const Inbox* V2xLayer::inbox(VehicleId id) const {
  auto it = inboxes_.find(id);
  return it == inboxes_.end() ? nullptr : &it->second;
}

std::uint64_t V2xLayer::sent(VehicleId origin, MessageKind kind) const {
  auto it = next_seq_.find({origin, kind});
  return it == next_seq_.end() ? 0 : it->second;
}

}  // namespace cvr
