#include "cvr/vehicle.hpp"

#include <fmt/format.h>

#include "cvr/error.hpp"

namespace cvr {

std::string_view to_string(VehicleKind kind) {
  return kind == VehicleKind::Passenger ? "PASSENGER" : "HGV";
}

VehicleKind parse_vehicle_kind(std::string_view text) {
  if (text == "PASSENGER") return VehicleKind::Passenger;
  if (text == "HGV") return VehicleKind::Hgv;
  throw NetworkError(fmt::format("unknown vehicle class '{}' (expected PASSENGER or HGV)", text));
}

std::string_view to_string(DriveMode mode) {
  switch (mode) {
    case DriveMode::Normal:
      return "normal";
    case DriveMode::BrokenDown:
      return "broken-down";
    case DriveMode::Caution:
      return "caution";
  }
  return "?";
}

VehicleClass VehicleClass::passenger() { return VehicleClass{}; }

VehicleClass VehicleClass::hgv() {
  VehicleClass c;
  c.kind = VehicleKind::Hgv;
  c.sigma = 0.4;
  c.length = 12.0;
  return c;
}

void VehicleClass::validate(double speed_cap) const {
  auto require = [](bool ok, std::string_view what) {
    if (!ok) throw SimulationError(fmt::format("vehicle class: {}", what));
  };
  require(max_accel > 0.0, "max_accel must be positive");
  require(max_decel > 0.0, "max_decel must be positive");
  require(max_speed > 0.0, "max_speed must be positive");
  require(max_speed <= speed_cap, "max_speed exceeds the network cap");
  require(min_gap > 0.0, "min_gap must be positive");
  require(length > 0.0, "length must be positive");
  require(sigma >= 0.0 && sigma <= 1.0, "sigma must lie in [0, 1]");
}

}  // namespace cvr
