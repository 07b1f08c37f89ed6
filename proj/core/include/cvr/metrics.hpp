#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cvr/network.hpp"
#include "cvr/vehicle.hpp"
#include "cvr/world.hpp"

namespace cvr {

struct JourneyRecord {
  VehicleId vehicle = 0;
  VehicleKind kind = VehicleKind::Passenger;
  double depart = 0.0;
  double arrive = 0.0;
  double journey_time = 0.0;
  double free_flow_time = 0.0;
  double delay = 0.0;
  bool rerouted = false;
};

/// Sum over the route of length / min(edge limit, class max speed).
double free_flow_time(const Route& route, const RoadNetwork& net, const VehicleClass& cls);

/// Throws cvr::SimulationError if the vehicle has not arrived.
JourneyRecord make_journey(const VehicleState& v, const RoadNetwork& net);

struct StepTraceRow {
  double t = 0.0;
  VehicleId vehicle = 0;
  EdgeIndex edge = 0;
  double pos = 0.0;
  double speed = 0.0;
  double accel = 0.0;
};

struct DecelStats {
  double mean = 0.0;      // m/s^2, magnitude
  double variance = 0.0;  // population variance
  std::uint64_t count = 0;
};

/// Mean and population variance of |a| over the negative entries of
/// `accels`, accumulated in the given order (two passes).
DecelStats decel_stats(const std::vector<double>& accels);

struct DetectorSpec {
  std::string id;
  std::string edge;
  double pos = 0.0;  // m from the edge start
};

struct DetectorHit {
  std::string detector;
  double t = 0.0;
  VehicleId vehicle = 0;
  double speed = 0.0;
};

/// Virtual loop detectors fed from the motion of each step.
class DetectorBank {
 public:
  DetectorBank() = default;
  /// Throws cvr::ConfigError for an unknown edge, a position outside
  /// (0, length] or a duplicate id.
  DetectorBank(const RoadNetwork& net, std::vector<DetectorSpec> specs);

  /// Counts every vehicle whose motion in the last step covered a detector:
  /// prev < pos <= new on its edge. Call after advance_world().
  void step(const World& world);

  const std::vector<DetectorSpec>& specs() const { return specs_; }
  const std::vector<DetectorHit>& hits() const { return hits_; }
  std::uint64_t count(const std::string& id) const;

 private:
  std::vector<DetectorSpec> specs_;
  std::vector<EdgeIndex> edges_;
  std::vector<DetectorHit> hits_;
  std::map<std::string, std::uint64_t> counts_;
};

}  // namespace cvr
