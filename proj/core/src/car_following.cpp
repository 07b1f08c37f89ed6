#include "cvr/car_following.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "cvr/error.hpp"

namespace cvr {

double safe_speed(double leader_speed, double gap_eff, double follower_speed, double max_decel,
                  double tau) {
  const double denom = (leader_speed + follower_speed) / (2.0 * max_decel) + tau;
  return std::max(0.0, leader_speed + (gap_eff - leader_speed * tau) / denom);
}

double krauss_speed(const VehicleState& follower, std::optional<LeaderInfo> leader, double dt,
                    double speed_cap, double r) {
  if (!(dt > 0.0)) throw SimulationError("krauss: dt must be positive");
  if (follower.mode == DriveMode::BrokenDown) {
    throw SimulationError(fmt::format("krauss: vehicle {} is broken down", follower.id));
  }
  const VehicleClass& c = follower.cls;
  double v_des = std::min(speed_cap, follower.speed + c.max_accel * dt);
  if (leader) {
    if (leader->gap < 0.0) {
      throw SimulationError(
          fmt::format("krauss: vehicle {} has negative gap {}", follower.id, leader->gap));
    }
    const double gap_eff = std::max(0.0, leader->gap - c.min_gap);
    v_des = std::min(v_des, safe_speed(leader->speed, gap_eff, follower.speed, c.max_decel, dt));
  }
  return std::max(0.0, v_des - c.sigma * c.max_accel * dt * r);
}

double krauss_step(const VehicleState& follower, std::optional<LeaderInfo> leader, double dt,
                   Rng& rng, double speed_cap) {
  return krauss_speed(follower, leader, dt, speed_cap, rng.uniform01());
}

LaneDecision lane_change_decide(const VehicleState& vehicle,
                                std::optional<LeaderInfo> same_lane_leader,
                                const AdjacentLane& adjacent, double dt, double desired_speed) {
  if (!same_lane_leader) return LaneDecision::Stay;
  const VehicleClass& c = vehicle.cls;

  const double constrained =
      safe_speed(same_lane_leader->speed, std::max(0.0, same_lane_leader->gap - c.min_gap),
                 vehicle.speed, c.max_decel, dt);
  if (constrained >= kLaneChangeIncentive * desired_speed) return LaneDecision::Stay;

  if (adjacent.front && adjacent.front->gap < c.min_gap + vehicle.speed * dt) {
    return LaneDecision::Stay;
  }
  if (adjacent.rear) {
    const RearNeighbor& rear = *adjacent.rear;
    if (rear.gap < 0.0) return LaneDecision::Stay;
    const double rear_safe = safe_speed(vehicle.speed, std::max(0.0, rear.gap - rear.cls.min_gap),
                                        rear.speed, rear.cls.max_decel, dt);
    if (rear_safe < rear.speed - rear.cls.max_decel * dt) return LaneDecision::Stay;
  }
  return LaneDecision::Change;
}

}  // namespace cvr
