#include "cvr/incident.hpp"

#include <doctest.h>

#include "cvr/error.hpp"
#include "support.hpp"

using namespace cvr;

namespace {

// Steps a 1 s clock and records every fired transition.
std::vector<std::pair<double, bool>> run_schedule(const BreakdownSchedule& s, double t0,
                                                  double dt = 1.0) {
  World w = test::empty_world(test::straight(5000));
  test::place(w, s.target, {"ST"}, 100);
  IncidentState state = initialize_schedule(s, t0);
  const double horizon = t0 + s.start + (s.duration + s.interval) * (s.count + 1) + 10;
  for (double t = t0; t <= horizon; t += dt) fire_due(state, w, nullptr, t, 1);
  std::vector<std::pair<double, bool>> out;
  for (const TransitionRecord& r : state.log)
    out.emplace_back(r.at, r.kind == TransitionKind::Start);
  return out;
}

}  // namespace

TEST_CASE("single breakdown") {
  auto seq = run_schedule({0, 1, 115, 300, 0, false}, 0);
  CHECK(seq == std::vector<std::pair<double, bool>>{{115, true}, {415, false}});
}

TEST_CASE("schedule matches the event-queue oracle") {
  Rng rng(2024);
  for (int i = 0; i < 100; ++i) {
    const int count = static_cast<int>(rng.below(5));
    const double start = static_cast<double>(rng.below(200));
    const double duration = static_cast<double>(1 + rng.below(300));
    const double interval = static_cast<double>(1 + rng.below(100));
    const double t0 = static_cast<double>(rng.below(50));
    BreakdownSchedule s{0, count, start, duration, interval, false};
    CHECK(run_schedule(s, t0) == test::breakdown_oracle(count, start, duration, interval, t0));
  }
}

TEST_CASE("a start stops the vehicle in place, a stop returns control") {
  World w = test::empty_world(test::straight(5000));
  test::place(w, 4, {"ST"}, 321, 20);
  IncidentState state = initialize_schedule({4, 1, 10, 5, 0, false}, 0);
  CHECK(fire_due(state, w, nullptr, 9, 1) == 0);
  CHECK(fire_due(state, w, nullptr, 10, 1) == 1);
  const VehicleState& v = w.vehicles.at(4);
  CHECK(v.mode == DriveMode::BrokenDown);
  CHECK(v.speed == 0.0);
  REQUIRE(state.location);
  CHECK(*state.location == BreakdownLocation{0, 321, 4});
  CHECK(state.active);
  CHECK(fire_due(state, w, nullptr, 15, 1) == 1);
  CHECK(v.mode == DriveMode::Normal);
  CHECK_FALSE(state.active);
  CHECK_FALSE(state.next_time);
}

TEST_CASE("an absent target is logged, not fatal") {
  World w = test::empty_world(test::straight(5000));
  IncidentState state = initialize_schedule({9, 1, 0, 5, 0, false}, 0);
  fire_due(state, w, nullptr, 0, 1);
  REQUIRE(state.log.size() == 1);
  CHECK_FALSE(state.log[0].applied);
  fire_due(state, w, nullptr, 5, 1);
  CHECK(state.log.size() == 2);
  CHECK_FALSE(state.next_time);
}

TEST_CASE("random target is reproducible") {
  auto pick = [](std::uint64_t seed) {
    World w = test::empty_world(test::straight(5000));
    for (VehicleId id = 0; id < 20; ++id) test::place(w, id, {"ST"}, 10.0 + 20.0 * id);
    IncidentState state = initialize_schedule({0, 1, 0, 5, 0, true}, 0);
    fire_due(state, w, nullptr, 0, seed);
    return state.target;
  };
  CHECK(pick(3) == pick(3));
  std::set<VehicleId> seen;
  for (std::uint64_t s = 0; s < 30; ++s) seen.insert(pick(s));
  CHECK(seen.size() > 3);
}

TEST_CASE("warnings are emitted once per beacon interval while active") {
  World w = test::empty_world(test::straight(5000));
  test::place(w, 0, {"ST"}, 100);
  test::place(w, 1, {"ST"}, 300);
  CommConfig cfg;
  cfg.beacon_interval = 2.0;
  V2xLayer v2x(cfg);
  IncidentState state = initialize_schedule({0, 1, 3, 6, 0, false}, 0);
  for (double t = 0; t <= 12; t += 1) {
    w.time = t;
    v2x.begin_step(w);
    fire_due(state, w, &v2x, t, 1);
    warning_emit_step(state, w, v2x, t);
    v2x.relay_step(w, {});
  }
  // Active over [3, 9): warnings at 3, 5, 7.
  CHECK(state.warnings_emitted == 3);
  CHECK(v2x.sent(0, MessageKind::BreakdownResolved) == 1);
}

TEST_CASE("schedule validation") {
  CHECK_THROWS_AS(initialize_schedule({0, -1, 0, 1, 0, false}, 0), ConfigError);
  CHECK_THROWS_AS(initialize_schedule({0, 1, 0, 0, 0, false}, 0), ConfigError);
  CHECK_THROWS_AS(initialize_schedule({0, 2, 0, 5, 0, false}, 0), ConfigError);
  CHECK_NOTHROW(initialize_schedule({0, 0, 0, 0, 0, false}, 0));
  CHECK_FALSE(initialize_schedule({0, 0, 10, 5, 0, false}, 0).next_time);
}
