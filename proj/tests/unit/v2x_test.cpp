#include "cvr/v2x.hpp"

#include <doctest.h>

#include <set>

#include "cvr/error.hpp"
#include "support.hpp"

using namespace cvr;

namespace {

// Vehicles at the given positions on one long straight edge.
World line_world(const std::vector<double>& positions) {
  World w = test::empty_world(test::straight(10000, kMotorwayCap, 1));
  for (std::size_t i = 0; i < positions.size(); ++i) {
    test::place(w, static_cast<VehicleId>(i), {"ST"}, positions[i]);
  }
  return w;
}

}  // namespace

TEST_CASE("range gate is inclusive") {
  CHECK(in_range({0, 0}, {300, 0}, 300));
  CHECK(in_range({0, 0}, {299, 0}, 300));
  CHECK_FALSE(in_range({0, 0}, {301, 0}, 300));
  CHECK(in_range({0, 0}, {180, 240}, 300));
  CHECK_FALSE(in_range({0, 0}, {180, 240.01}, 300));
}

TEST_CASE("broadcast reaches exactly the vehicles in range") {
  for (double d : {299.0, 300.0, 301.0}) {
    World w = line_world({50, 50 + d});
    V2xLayer v2x(CommConfig{});
    v2x.begin_step(w);
    auto receivers =
        v2x.originate(w, 0, MessageKind::BreakdownWarning, BreakdownLocation{0, 50, 0});
    CHECK(receivers.size() == (d <= 300 ? 1u : 0u));
  }
}

TEST_CASE("grid lookup agrees with brute force across cell borders") {
  Rng rng(11);
  for (int round = 0; round < 50; ++round) {
    std::vector<double> pos;
    for (int i = 0; i < 40; ++i) pos.push_back(rng.uniform01() * 9999 + 0.5);
    World w = line_world(pos);
    V2xLayer v2x(CommConfig{});
    v2x.begin_step(w);
    const VehicleId sender = static_cast<VehicleId>(rng.below(40));
    auto receivers = v2x.originate(w, sender, MessageKind::Beacon);
    std::vector<VehicleId> expected;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      if (static_cast<VehicleId>(i) != sender && std::abs(pos[i] - pos[sender]) <= 300) {
        expected.push_back(static_cast<VehicleId>(i));
      }
    }
    CHECK(receivers == expected);
  }
}

TEST_CASE("a warning floods a 250 m chain one hop per step") {
  std::vector<double> pos;
  for (int i = 0; i < 10; ++i) pos.push_back(100 + 250.0 * i);
  World w = line_world(pos);
  V2xLayer v2x(CommConfig{});
  std::map<VehicleId, int> handled;
  std::map<VehicleId, int> hops;
  auto handler = [&](VehicleId id, const V2xMessage& m) {
    ++handled[id];
    hops[id] = m.hop_count;
  };
  v2x.begin_step(w);
  v2x.originate(w, 0, MessageKind::BreakdownWarning, BreakdownLocation{0, 100, 0});
  v2x.relay_step(w, handler);
  CHECK(handled.size() == 1);
  for (int step = 1; step < 12; ++step) {
    v2x.begin_step(w);
    v2x.relay_step(w, handler);
  }
  CHECK(handled.size() == 9);
  for (VehicleId id = 1; id < 10; ++id) {
    CHECK(handled[id] == 1);
    CHECK(hops[id] == id);
  }
  CHECK(v2x.stats().duplicate_handler_calls == 0);
  CHECK(v2x.stats().handler_calls == 9);
  // Vehicle 0 knows its own warning and never handles it.
  CHECK(handled.count(0) == 0);
}

TEST_CASE("hop limit stops the flood") {
  std::vector<double> pos;
  for (int i = 0; i < 6; ++i) pos.push_back(100 + 250.0 * i);
  World w = line_world(pos);
  CommConfig cfg;
  cfg.max_hops = 2;
  V2xLayer v2x(cfg);
  std::set<VehicleId> reached;
  auto handler = [&](VehicleId id, const V2xMessage&) { reached.insert(id); };
  v2x.begin_step(w);
  v2x.originate(w, 0, MessageKind::BreakdownWarning, BreakdownLocation{0, 100, 0});
  for (int step = 0; step < 8; ++step) {
    if (step > 0) v2x.begin_step(w);
    v2x.relay_step(w, handler);
  }
  CHECK(reached == std::set<VehicleId>{1, 2});
}

TEST_CASE("dense cluster: each vehicle handles each warning once") {
  std::vector<double> pos;
  for (int i = 0; i < 30; ++i) pos.push_back(1000 + 7.0 * i);
  World w = line_world(pos);
  V2xLayer v2x(CommConfig{});
  std::map<VehicleId, int> handled;
  auto handler = [&](VehicleId id, const V2xMessage&) { ++handled[id]; };
  for (int step = 0; step < 5; ++step) {
    v2x.begin_step(w);
    v2x.originate(w, 3, MessageKind::BreakdownWarning, BreakdownLocation{0, 1021, 3});
    v2x.relay_step(w, handler);
  }
  CHECK(handled.size() == 29);
  for (const auto& [id, n] : handled) CHECK(n == 5);  // five distinct warnings
  CHECK(v2x.stats().duplicate_handler_calls == 0);
  CHECK(v2x.sent(3, MessageKind::BreakdownWarning) == 5);
}

TEST_CASE("beacons are not relayed and not logged by default") {
  World w = line_world({100, 200, 300});
  V2xLayer v2x(CommConfig{});
  int calls = 0;
  v2x.begin_step(w);
  v2x.beacon_step(w, 0.0);
  v2x.relay_step(w, [&](VehicleId, const V2xMessage&) { ++calls; });
  CHECK(calls == 0);
  CHECK(v2x.stats().broadcasts == 3);
  CHECK(v2x.stats().deliveries == 6);
  CHECK(v2x.deliveries().empty());
  v2x.begin_step(w);
  v2x.relay_step(w, {});
  CHECK(v2x.stats().relays == 0);
}

TEST_CASE("beacon phase follows each vehicle's departure") {
  World w = line_world({100});
  w.vehicles.at(0).depart_time = 0.5;
  CommConfig cfg;
  cfg.beacon_interval = 1.0;
  V2xLayer v2x(cfg);
  v2x.begin_step(w);
  v2x.beacon_step(w, 1.0);
  CHECK(v2x.sent(0, MessageKind::Beacon) == 0);
  v2x.beacon_step(w, 1.5);
  CHECK(v2x.sent(0, MessageKind::Beacon) == 1);
}

TEST_CASE("bad sender and bad configuration") {
  World w = line_world({100});
  V2xLayer v2x(CommConfig{});
  v2x.begin_step(w);
  CHECK_THROWS_AS(v2x.originate(w, 7, MessageKind::Beacon), SimulationError);
  CommConfig cfg;
  cfg.range = 0;
  CHECK_THROWS_AS(V2xLayer{cfg}, ConfigError);
  cfg = {};
  cfg.max_hops = -1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
