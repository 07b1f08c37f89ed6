#pragma once

#include <optional>

#include "cvr/rng.hpp"
#include "cvr/vehicle.hpp"

namespace cvr {

/// Leader as seen from a follower. `gap` runs from the follower's front
/// bumper to the leader's rear bumper.
struct LeaderInfo {
  double speed = 0.0;
  double gap = 0.0;
};

/// Krauss safe speed with reaction time `tau`:
///   v_safe = v_l + (g - v_l*tau) / ((v_l + v_f) / (2b) + tau), floored at 0.
/// `gap_eff` is the gap net of the follower's minimum gap.
double safe_speed(double leader_speed, double gap_eff, double follower_speed, double max_decel,
                  double tau);

/// One Krauss update with an explicit dawdle draw `r` in [0, 1):
///   v_des = min(speed_cap, v + a*dt, v_safe); v' = max(0, v_des - sigma*a*dt*r).
/// The reaction time equals `dt`. Throws cvr::SimulationError on a negative
/// gap or a broken-down follower.
double krauss_speed(const VehicleState& follower, std::optional<LeaderInfo> leader, double dt,
                    double speed_cap, double r);

/// krauss_speed() with `r` drawn from `rng`.
double krauss_step(const VehicleState& follower, std::optional<LeaderInfo> leader, double dt,
                   Rng& rng, double speed_cap);

/// Vehicle behind the gap in the target lane. `gap` runs from its front to
/// the changing vehicle's rear.
struct RearNeighbor {
  double speed = 0.0;
  double gap = 0.0;
  VehicleClass cls;
};

struct AdjacentLane {
  std::optional<LeaderInfo> front;
  std::optional<RearNeighbor> rear;
};

enum class LaneDecision { Stay, Change };

/// A same-lane leader must hold the safe speed below this fraction of the
/// desired speed before a lane change is considered.
inline constexpr double kLaneChangeIncentive = 0.5;

/// Simplified incentive + safety lane-change rule. Change iff the same-lane
/// leader constrains v_safe below kLaneChangeIncentive * desired_speed, the
/// target lane's front gap is at least min_gap + v*dt, and the new follower
/// would not need to brake harder than its max_decel.
LaneDecision lane_change_decide(const VehicleState& vehicle,
                                std::optional<LeaderInfo> same_lane_leader,
                                const AdjacentLane& adjacent, double dt, double desired_speed);

}  // namespace cvr
