#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "cvr/v2x.hpp"
#include "cvr/vehicle.hpp"
#include "cvr/world.hpp"

namespace cvr {

struct BreakdownSchedule {
  VehicleId target = 0;
  int count = 0;
  double start = 115.0;     // s after scenario start
  double duration = 300.0;  // s
  double interval = 0.0;    // s from a clearance to the next breakdown
  bool random = false;      // pick the target among active vehicles at the first start

  /// Throws cvr::ConfigError on a negative count or start, a nonpositive
  /// duration, or a nonpositive interval with count > 1.
  void validate() const;
};

enum class TransitionKind { Start, Stop };

std::string_view to_string(TransitionKind kind);

struct TransitionRecord {
  double at = 0.0;    // scheduled time
  double step = 0.0;  // step at which it fired
  TransitionKind kind = TransitionKind::Start;
  VehicleId vehicle = 0;
  bool applied = true;  // false when the vehicle was not on the road
};

struct IncidentState {
  BreakdownSchedule schedule;
  int remaining = 0;
  bool active = false;
  std::optional<BreakdownLocation> location;
  std::optional<double> next_time;  // none once the schedule is exhausted
  TransitionKind pending = TransitionKind::Start;
  VehicleId target = 0;
  bool target_chosen = false;
  double next_warning = 0.0;
  std::uint64_t warnings_emitted = 0;
  std::vector<TransitionRecord> log;
};

IncidentState initialize_schedule(const BreakdownSchedule& schedule, double t0);

/// Applies the pending transition scheduled at `state.next_time`. A start
/// stops the target in place (BrokenDown, speed 0); a stop returns it to
/// car-following control and, when `v2x` is given, broadcasts one
/// BreakdownResolved. `seed` feeds the random target choice.
void fire_transition(IncidentState& state, World& world, V2xLayer* v2x, double t,
                     std::uint64_t seed);

/// Fires every transition due at or before step time `t`, in order.
/// Returns the number fired.
int fire_due(IncidentState& state, World& world, V2xLayer* v2x, double t, std::uint64_t seed);

/// While a breakdown is active, the stopped vehicle sends one
/// BreakdownWarning per beacon interval.
void warning_emit_step(IncidentState& state, const World& world, V2xLayer& v2x, double t);

}  // namespace cvr
