#include "cvr/car_following.hpp"

#include <doctest.h>

#include <cmath>

#include "cvr/error.hpp"

using namespace cvr;

namespace {

VehicleState at_speed(double v, VehicleClass cls = VehicleClass::passenger()) {
  VehicleState s;
  s.cls = cls;
  s.speed = v;
  return s;
}

}  // namespace

TEST_CASE("free road accelerates up to the cap") {
  auto v = at_speed(10);
  CHECK(krauss_speed(v, std::nullopt, 1.0, 30, 0.0) == doctest::Approx(12.6));
  CHECK(krauss_speed(at_speed(25), std::nullopt, 1.0, 26, 0.0) == 26.0);
  // Dawdling removes sigma * a * dt * r.
  CHECK(krauss_speed(v, std::nullopt, 1.0, 30, 0.5) == doctest::Approx(12.6 - 0.6 * 2.6 * 0.5));
}

TEST_CASE("safe speed formula") {
  // v_l = 10, g = 20, v_f = 10, b = 4.5, tau = 1
  const double expected = 10 + (20 - 10) / (20 / 9.0 + 1);
  CHECK(safe_speed(10, 20, 10, 4.5, 1) == doctest::Approx(expected));
  CHECK(safe_speed(0, 0, 20, 4.5, 1) == 0.0);
}

TEST_CASE("standing leader at zero effective gap stops the follower") {
  auto v = at_speed(5);
  CHECK(krauss_speed(v, LeaderInfo{0, 2.5}, 1.0, 30, 0.0) == 0.0);
  CHECK(krauss_speed(v, LeaderInfo{0, 1.0}, 1.0, 30, 0.0) == 0.0);
}

TEST_CASE("invalid inputs") {
  auto v = at_speed(5);
  CHECK_THROWS_AS(krauss_speed(v, LeaderInfo{0, -0.1}, 1.0, 30, 0), SimulationError);
  CHECK_THROWS_AS(krauss_speed(v, std::nullopt, 0.0, 30, 0), SimulationError);
  v.mode = DriveMode::BrokenDown;
  CHECK_THROWS_AS(krauss_speed(v, std::nullopt, 1.0, 30, 0), SimulationError);
}

TEST_CASE("output stays within [0, cap] and respects the leader") {
  Rng rng(5);
  for (int i = 0; i < 20000; ++i) {
    const VehicleClass cls = rng.below(2) == 0 ? VehicleClass::passenger() : VehicleClass::hgv();
    auto v = at_speed(rng.uniform01() * 30, cls);
    const double cap = 1 + rng.uniform01() * 29;
    const double dt = 0.1 + rng.uniform01();
    std::optional<LeaderInfo> leader;
    if (rng.below(4) != 0) leader = LeaderInfo{rng.uniform01() * 30, rng.uniform01() * 100};
    const double out = krauss_step(v, leader, dt, rng, cap);
    CHECK(out >= 0.0);
    CHECK(out <= std::max(cap, 0.0) + 1e-12);
    CHECK(out <= v.speed + cls.max_accel * dt + 1e-12);
    if (leader) {
      const double safe = safe_speed(leader->speed, std::max(0.0, leader->gap - cls.min_gap),
                                     v.speed, cls.max_decel, dt);
      CHECK(out <= safe + 1e-12);
    }
  }
}

TEST_CASE("a follower that starts at a safe gap behind a braking leader keeps a positive gap") {
  // Leader brakes at max_decel from 25 m/s; follower uses the Krauss rule.
  for (double gap0 : {27.5, 40.0, 80.0}) {
    auto follower = at_speed(25);
    double leader_speed = 25, gap = gap0;
    const double dt = 1.0;
    for (int step = 0; step < 20; ++step) {
      const double next_leader = std::max(0.0, leader_speed - 4.5 * dt);
      const double v = krauss_speed(follower, LeaderInfo{leader_speed, gap}, dt, 30, 0.0);
      gap += next_leader * dt - v * dt;
      follower.speed = v;
      leader_speed = next_leader;
      CHECK(gap >= 0.0);
    }
  }
}

TEST_CASE("lane change decisions") {
  auto v = at_speed(20);
  const double desired = 26.8224;
  // No leader or an unconstraining leader: stay.
  CHECK(lane_change_decide(v, std::nullopt, {}, 1.0, desired) == LaneDecision::Stay);
  CHECK(lane_change_decide(v, LeaderInfo{25, 200}, {}, 1.0, desired) == LaneDecision::Stay);
  // Stopped leader close ahead, empty target lane: change.
  CHECK(lane_change_decide(v, LeaderInfo{0, 10}, {}, 1.0, desired) == LaneDecision::Change);
  // Target front gap too small.
  AdjacentLane tight{LeaderInfo{0, 10}, std::nullopt};
  CHECK(lane_change_decide(v, LeaderInfo{0, 10}, tight, 1.0, desired) == LaneDecision::Stay);
  // Fast rear vehicle right behind: it would have to brake too hard.
  AdjacentLane rear{std::nullopt, RearNeighbor{30, 1, VehicleClass::passenger()}};
  CHECK(lane_change_decide(v, LeaderInfo{0, 10}, rear, 1.0, desired) == LaneDecision::Stay);
  // Slow rear vehicle far behind: fine.
  AdjacentLane relaxed{std::nullopt, RearNeighbor{5, 80, VehicleClass::passenger()}};
  CHECK(lane_change_decide(v, LeaderInfo{0, 10}, relaxed, 1.0, desired) == LaneDecision::Change);
}

TEST_CASE("vehicle classes") {
  CHECK_NOTHROW(VehicleClass::passenger().validate());
  CHECK_NOTHROW(VehicleClass::hgv().validate());
  CHECK(VehicleClass::hgv().length > VehicleClass::passenger().length);
  auto bad = VehicleClass::passenger();
  bad.sigma = 1.5;
  CHECK_THROWS_AS(bad.validate(), SimulationError);
  bad = VehicleClass::passenger();
  bad.max_speed = 40;
  CHECK_THROWS_AS(bad.validate(), SimulationError);
  CHECK(parse_vehicle_kind("HGV") == VehicleKind::Hgv);
  CHECK_THROWS_AS(parse_vehicle_kind("hgv"), NetworkError);
}

TEST_CASE("named random streams are independent and reproducible") {
  CHECK(derive_seed(1, "demand") == derive_seed(1, "demand"));
  CHECK(derive_seed(1, "demand") != derive_seed(1, "driver"));
  CHECK(derive_seed(1, "driver", 3) != derive_seed(1, "driver", 4));
  CHECK(derive_seed(1, "demand") != derive_seed(2, "demand"));
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(rng.below(7) < 7);
  }
}
