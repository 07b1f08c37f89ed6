#include "cvr/demand.hpp"

#include <doctest.h>

#include <sstream>

#include "cvr/error.hpp"
#include "support.hpp"

using namespace cvr;

namespace {

DemandSpec parse(const std::string& text) {
  std::istringstream in(text);
  return parse_demand(in, "demand.txt");
}

}  // namespace

TEST_CASE("generated demand has exact counts and even spacing") {
  DemandGenerator gen{400, 0.8, 800, "O", "D"};
  auto spec = generate_demand(gen, 42);
  REQUIRE(spec.total() == 400);
  CHECK(spec.count(VehicleKind::Passenger) == 320);
  CHECK(spec.count(VehicleKind::Hgv) == 80);
  for (std::size_t i = 0; i < spec.total(); ++i) {
    CHECK(spec.schedule[i].id == static_cast<VehicleId>(i));
    CHECK(spec.schedule[i].depart == doctest::Approx(2.0 * static_cast<double>(i)));
    CHECK(spec.schedule[i].origin == "O");
  }
}

TEST_CASE("class order depends on the seed only") {
  DemandGenerator gen{100, 0.5, 100, "O", "D"};
  CHECK(generate_demand(gen, 1).schedule == generate_demand(gen, 1).schedule);
  CHECK(generate_demand(gen, 1).schedule != generate_demand(gen, 2).schedule);
}

TEST_CASE("fraction rounding and bounds") {
  CHECK(generate_demand({3, 0.5, 10, "O", "D"}, 1).count(VehicleKind::Passenger) == 2);
  CHECK(generate_demand({10, 0.0, 10, "O", "D"}, 1).count(VehicleKind::Passenger) == 0);
  CHECK(generate_demand({0, 0.8, 10, "O", "D"}, 1).total() == 0);
  CHECK_THROWS_AS(generate_demand({10, 1.5, 10, "O", "D"}, 1), ConfigError);
  CHECK_THROWS_AS(generate_demand({10, 0.5, -1, "O", "D"}, 1), ConfigError);
}

TEST_CASE("demand file parses, sorts and round-trips") {
  auto spec =
      parse("# comment\nVEH 2 HGV 5 O D\nVEH 1 PASSENGER 5 O D  # tie\nVEH 0 PASSENGER 7.5 A B\n");
  REQUIRE(spec.total() == 3);
  CHECK(spec.schedule[0].id == 1);
  CHECK(spec.schedule[1].id == 2);
  CHECK(spec.schedule[1].kind == VehicleKind::Hgv);
  CHECK(spec.schedule[2].depart == 7.5);
  CHECK(parse(serialize_demand(spec)).schedule == spec.schedule);
}

TEST_CASE("malformed demand records") {
  CHECK_THROWS_WITH_AS(parse("VEH 1 PASSENGER 0 O\n"), "demand.txt:1: VEH expects 5 fields",
                       NetworkError);
  CHECK_THROWS_AS(parse("VEH 1 PASSENGER 0 O D extra\n"), NetworkError);
  CHECK_THROWS_AS(parse("VEH 1 BUS 0 O D\n"), NetworkError);
  CHECK_THROWS_AS(parse("VEH x PASSENGER 0 O D\n"), NetworkError);
  CHECK_THROWS_AS(parse("CAR 1 PASSENGER 0 O D\n"), NetworkError);
  CHECK_THROWS_AS(parse("VEH 1 PASSENGER 0 O D\nVEH 1 HGV 3 O D\n"), NetworkError);
  CHECK_THROWS_AS(parse("VEH 1 PASSENGER -2 O D\n"), NetworkError);
}

TEST_CASE("endpoints are checked against the network") {
  auto net = test::diamond();
  DemandSpec spec{{{0, VehicleKind::Passenger, 0, "A", "D"}}, 0};
  CHECK_NOTHROW(validate_demand(spec, &net));
  spec.schedule[0].destination = "Z";
  CHECK_THROWS_AS(validate_demand(spec, &net), NetworkError);
}
