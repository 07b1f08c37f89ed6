#include "cvr/metrics.hpp"

#include <doctest.h>

#include "cvr/builtin.hpp"
#include "cvr/error.hpp"
#include "support.hpp"

using namespace cvr;

TEST_CASE("decel statistics over negative samples only") {
  DecelStats s = decel_stats({1.0, -1.0, 0.0, -3.0, 2.0});
  CHECK(s.count == 2);
  CHECK(s.mean == 2.0);
  CHECK(s.variance == 1.0);
  CHECK(decel_stats({}).count == 0);
  CHECK(decel_stats({0.5, 0.0}).mean == 0.0);
}

TEST_CASE("decel variance matches a naive computation") {
  Rng rng(8);
  std::vector<double> a;
  for (int i = 0; i < 5000; ++i) a.push_back((rng.uniform01() - 0.6) * 9);
  double sum = 0, sq = 0;
  int n = 0;
  for (double x : a) {
    if (x < 0) {
      sum += -x;
      sq += x * x;
      ++n;
    }
  }
  const double mean = sum / n;
  DecelStats s = decel_stats(a);
  CHECK(s.mean == doctest::Approx(mean));
  CHECK(s.variance == doctest::Approx(sq / n - mean * mean));
  CHECK(s.variance >= 0.0);
}

TEST_CASE("free-flow time uses the slower of limit and class speed") {
  auto net = builtin_network("junction");
  Route r{{net.edge_index("m1"), net.edge_index("r1"), net.edge_index("r2"), net.edge_index("m3")},
          net.node_index("O"),
          net.node_index("D")};
  auto slow = VehicleClass::passenger();
  slow.max_speed = 20;
  CHECK(free_flow_time(r, net, VehicleClass::passenger()) ==
        doctest::Approx(2800 / kMotorwayCap + 640 / 22.352 + 1700 / kMotorwayCap));
  CHECK(free_flow_time(r, net, slow) == doctest::Approx((2800 + 640 + 1700) / 20.0));
}

TEST_CASE("journey records need an arrival") {
  auto net = test::straight(100);
  VehicleState v;
  v.route = {{0}, 0, 1};
  v.depart_time = 3;
  CHECK_THROWS_AS(make_journey(v, net), SimulationError);
  v.arrive_time = 13;
  JourneyRecord r = make_journey(v, net);
  CHECK(r.journey_time == 10);
  CHECK(r.delay == doctest::Approx(10 - 100 / kMotorwayCap));
}

TEST_CASE("detectors count crossings of their position") {
  World w = test::empty_world(test::straight(1000, 20));
  test::place(w, 0, {"ST"}, 0, 20);
  test::place(w, 1, {"ST"}, 100, 20);
  DetectorBank bank(w.network, {{"A", "ST", 150}, {"B", "ST", 1000}});
  for (int i = 0; i < 80 && !w.vehicles.empty(); ++i) {
    advance_world(w);
    bank.step(w);
  }
  CHECK(bank.count("A") == 2);
  CHECK(bank.count("B") == 2);
  CHECK(bank.count("missing") == 0);
  REQUIRE(bank.hits().size() == 4);
  CHECK(bank.hits()[0].vehicle == 1);
}

TEST_CASE("detector validation") {
  auto net = test::straight(1000);
  CHECK_THROWS_AS(DetectorBank(net, {{"A", "XX", 10}}), ConfigError);
  CHECK_THROWS_AS(DetectorBank(net, {{"A", "ST", 0}}), ConfigError);
  CHECK_THROWS_AS(DetectorBank(net, {{"A", "ST", 1001}}), ConfigError);
  CHECK_THROWS_AS(DetectorBank(net, {{"A", "ST", 5}, {"A", "ST", 6}}), ConfigError);
}
