#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "cvr/network.hpp"
#include "cvr/vehicle.hpp"
#include "cvr/world.hpp"

namespace cvr {

struct CommConfig {
  double beacon_interval = 1.0;   // s
  double range = 300.0;           // m
  double tx_power_mw = 20.0;      // recorded only
  double antenna_height = 1.895;  // m, recorded only
  int packet_size = 1024;         // bytes, bookkeeping only
  int max_hops = 0;               // relay limit, 0 = unlimited
  bool log_beacons = false;       // beacon deliveries in the delivery log

  /// Throws cvr::ConfigError on a nonpositive interval/range/packet size or
  /// a negative hop limit.
  void validate() const;
};

enum class MessageKind { Beacon, BreakdownWarning, BreakdownResolved };

std::string_view to_string(MessageKind kind);

/// Warnings and resolutions are flooded; beacons are single hop.
inline bool is_relayed(MessageKind kind) { return kind != MessageKind::Beacon; }

struct MessageKey {
  VehicleId origin = 0;
  MessageKind kind = MessageKind::Beacon;
  std::uint64_t seq = 0;

  friend auto operator<=>(const MessageKey&, const MessageKey&) = default;
};

struct Kinematics {
  EdgeIndex edge = 0;
  double pos = 0.0;
  double speed = 0.0;
  double accel = 0.0;
  VehicleKind kind = VehicleKind::Passenger;
};

struct V2xMessage {
  MessageKind kind = MessageKind::Beacon;
  VehicleId origin = 0;
  std::uint64_t seq = 0;
  double sent_at = 0.0;
  Point sender_position;
  std::optional<BreakdownLocation> breakdown;  // warnings and resolutions
  Kinematics kinematics;                       // beacons
  int hop_count = 0;                           // radio hops traversed; 0 at the origin

  MessageKey key() const { return {origin, kind, seq}; }
};

struct Inbox {
  std::vector<V2xMessage> messages;  // this step's deliveries
  std::set<MessageKey> seen;
};

/// One delivery of one message copy, as written to messages.csv.
struct DeliveryRow {
  double t = 0.0;
  MessageKind kind = MessageKind::Beacon;
  VehicleId origin = 0;
  std::uint64_t seq = 0;
  VehicleId sender = 0;
  VehicleId receiver = 0;
  int hop_count = 0;
};

struct V2xStats {
  std::uint64_t broadcasts = 0;
  std::uint64_t deliveries = 0;
  std::uint64_t relays = 0;
  std::uint64_t handler_calls = 0;
  std::uint64_t duplicate_handler_calls = 0;  // audit; must stay 0
};

/// True iff the Euclidean distance between `a` and `b` is at most `range`.
bool in_range(Point a, Point b, double range);

/// Error-free range-gated broadcast among the active vehicles of a World.
///
/// Per step: begin_step() snapshots positions, then any number of
/// originate()/beacon_step() calls fill inboxes, then relay_step() drains
/// them. Relayed copies go on air at the next step's relay_step(), so a
/// warning advances one hop per step.
class V2xLayer {
 public:
  using Handler = std::function<void(VehicleId receiver, const V2xMessage&)>;

  explicit V2xLayer(CommConfig config);

  const CommConfig& config() const { return config_; }

  void begin_step(const World& world);

  /// Sends a new message from `origin` (fresh per-origin, per-kind seq).
  /// Returns the receivers in ascending id order.
  std::vector<VehicleId> originate(const World& world, VehicleId origin, MessageKind kind,
                                   std::optional<BreakdownLocation> breakdown = std::nullopt);

  /// Delivers `message` (one more hop) from `sender` to every other active
  /// vehicle in range. Throws cvr::SimulationError for an unknown sender.
  std::vector<VehicleId> broadcast(const World& world, VehicleId sender, const V2xMessage& message);

  /// Every active vehicle whose age is a multiple of the beacon interval
  /// sends one beacon.
  void beacon_step(const World& world, double t);

  /// Sends last step's relays, then drains inboxes in ascending receiver
  /// order: each unseen relayed-kind message is marked seen, queued for
  /// relay and passed to `handler`. Duplicates are dropped.
  void relay_step(const World& world, const Handler& handler);

  const Inbox* inbox(VehicleId id) const;
  const std::vector<DeliveryRow>& deliveries() const { return log_; }
  const V2xStats& stats() const { return stats_; }
  std::uint64_t sent(VehicleId origin, MessageKind kind) const;

 private:
  struct Cell {
    long long x;
    long long y;
    friend auto operator<=>(const Cell&, const Cell&) = default;
  };
  Cell cell_of(Point p) const;
  const Point* snapshot_position(VehicleId id) const;

  CommConfig config_;
  double time_ = 0.0;
  std::map<VehicleId, Point> positions_;
  std::map<Cell, std::vector<VehicleId>> grid_;
  std::map<VehicleId, Inbox> inboxes_;
  std::vector<std::pair<VehicleId, V2xMessage>> pending_relays_;
  std::map<std::pair<VehicleId, MessageKind>, std::uint64_t> next_seq_;
  std::set<std::pair<VehicleId, MessageKey>> handled_;
  std::vector<DeliveryRow> log_;
  V2xStats stats_;
};

}  // namespace cvr
