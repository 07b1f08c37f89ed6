#include "cvr/incident.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <cmath>

#include "cvr/error.hpp"

namespace cvr {
namespace {

constexpr double kEps = 1e-9;

}  // namespace

void BreakdownSchedule::validate() const {
  if (count < 0) throw ConfigError(fmt::format("breakdown.count must be >= 0, got {}", count));
  if (count == 0) return;
  if (!(start >= 0.0) || !std::isfinite(start)) {
    throw ConfigError(fmt::format("breakdown.start_s must be >= 0, got {}", start));
  }
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ConfigError(fmt::format("breakdown.duration_s must be positive, got {}", duration));
  }
  if (count > 1 && (!(interval > 0.0) || !std::isfinite(interval))) {
    throw ConfigError(
        fmt::format("breakdown.interval_s must be positive when count > 1, got {}", interval));
  }
}

std::string_view to_string(TransitionKind kind) {
  return kind == TransitionKind::Start ? "start" : "stop";
}

IncidentState initialize_schedule(const BreakdownSchedule& schedule, double t0) {
  schedule.validate();
  IncidentState state;
  state.schedule = schedule;
  state.remaining = schedule.count;
  state.target = schedule.target;
  state.target_chosen = !schedule.random;
  if (schedule.count > 0) {
    state.next_time = t0 + schedule.start;
    state.pending = TransitionKind::Start;
  }
  return state;
}

void fire_transition(IncidentState& state, World& world, V2xLayer* v2x, double t,
                     std::uint64_t seed) {
  if (!state.next_time) throw SimulationError("no pending breakdown transition");
  const double at = *state.next_time;
  TransitionRecord record{at, t, state.pending, state.target, true};

  if (state.pending == TransitionKind::Start) {
    if (!state.target_chosen) {
      state.target_chosen = true;
      if (!world.vehicles.empty()) {
        Rng rng(derive_seed(seed, "incident"));
        auto it = world.vehicles.begin();
        std::advance(it, static_cast<std::ptrdiff_t>(rng.below(world.vehicles.size())));
        state.target = it->first;
      }
      record.vehicle = state.target;
    }
    VehicleState* v = world.find(state.target);
    if (v == nullptr) {
      record.applied = false;
      spdlog::warn("t={}: breakdown start skipped, vehicle {} is not on the road", t, state.target);
    } else {
      v->mode = DriveMode::BrokenDown;
      v->caution_for.reset();
      v->speed = 0.0;
      state.location = BreakdownLocation{v->edge(), v->pos, v->id};
    }
    state.active = true;
    state.next_warning = at;
    state.remaining -= 1;
    state.pending = TransitionKind::Stop;
    state.next_time = at + state.schedule.duration;
  } else {
    VehicleState* v = world.find(state.target);
    if (v == nullptr || v->mode != DriveMode::BrokenDown) {
      record.applied = false;
      spdlog::warn("t={}: breakdown stop skipped, vehicle {} is not broken down", t, state.target);
    } else {
      v->mode = DriveMode::Normal;
      if (v2x != nullptr && state.location) {
        v2x->originate(world, v->id, MessageKind::BreakdownResolved, state.location);
      }
    }
    state.active = false;
    state.location.reset();
    state.pending = TransitionKind::Start;
    if (state.remaining > 0) {
      state.next_time = at + state.schedule.interval;
    } else {
      state.next_time.reset();
    }
  }
  state.log.push_back(record);
}

int fire_due(IncidentState& state, World& world, V2xLayer* v2x, double t, std::uint64_t seed) {
  int fired = 0;
  while (state.next_time && *state.next_time <= t + kEps) {
    fire_transition(state, world, v2x, t, seed);
    ++fired;
  }
  return fired;
}

void warning_emit_step(IncidentState& state, const World& world, V2xLayer& v2x, double t) {
  if (!state.active || !state.location) return;
  if (world.find(state.location->vehicle) == nullptr) return;
  if (t + kEps < state.next_warning) return;
  v2x.originate(world, state.location->vehicle, MessageKind::BreakdownWarning, state.location);
  ++state.warnings_emitted;
  const double interval = v2x.config().beacon_interval;
  while (state.next_warning <= t + kEps) state.next_warning += interval;
}

}  // namespace cvr
