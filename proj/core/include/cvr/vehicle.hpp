#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "cvr/network.hpp"
#include "cvr/rng.hpp"

namespace cvr {

using VehicleId = std::int64_t;

/// 60 mph in m/s, the network-wide speed ceiling.
inline constexpr double kMotorwayCap = 26.8224;

enum class VehicleKind { Passenger, Hgv };

std::string_view to_string(VehicleKind kind);
/// Accepts PASSENGER / HGV (the demand file spelling).
VehicleKind parse_vehicle_kind(std::string_view text);

struct VehicleClass {
  VehicleKind kind = VehicleKind::Passenger;
  double max_accel = 2.6;           // m/s^2
  double max_decel = 4.5;           // m/s^2, positive magnitude
  double max_speed = kMotorwayCap;  // m/s
  double min_gap = 2.5;             // m
  double sigma = 0.6;               // driver imperfection in [0, 1]
  double length = 5.0;              // m

  static VehicleClass passenger();
  static VehicleClass hgv();
  static VehicleClass of(VehicleKind kind) {
    return kind == VehicleKind::Passenger ? passenger() : hgv();
  }

  /// Throws cvr::SimulationError if any parameter is out of range.
  void validate(double speed_cap = kMotorwayCap) const;
};

enum class DriveMode { Normal, BrokenDown, Caution };

std::string_view to_string(DriveMode mode);

struct BreakdownLocation {
  EdgeIndex edge = 0;
  double pos = 0.0;
  VehicleId vehicle = 0;

  friend bool operator==(const BreakdownLocation&, const BreakdownLocation&) = default;
};

struct VehicleState {
  VehicleId id = 0;
  VehicleClass cls;
  Route route;
  std::size_t route_index = 0;
  int lane = 0;
  double pos = 0.0;    // m along the current edge
  double speed = 0.0;  // m/s
  double accel = 0.0;  // m/s^2, signed, last step
  DriveMode mode = DriveMode::Normal;
  double depart_time = 0.0;
  std::optional<double> arrive_time;
  bool rerouted = false;

  // Travel-time overrides this vehicle has learnt from warnings. Only
  // informed vehicles see them.
  OverrideMap view;
  // Set while in Caution mode: the breakdown being approached.
  std::optional<BreakdownLocation> caution_for;

  Rng driver;                // driver-imperfection stream, one per vehicle
  double slow_since = -1.0;  // start of the current near-standstill, -1 if moving

  EdgeIndex edge() const { return route.edges[route_index]; }
  bool on_last_edge() const { return route_index + 1 == route.edges.size(); }
};

}  // namespace cvr
