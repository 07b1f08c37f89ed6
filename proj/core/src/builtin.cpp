#include "cvr/builtin.hpp"

#include <fmt/format.h>

#include "cvr/error.hpp"
#include "cvr/network_io.hpp"

namespace cvr {
namespace {

constexpr std::string_view kJunction = R"(# junction: breakdown inside the J1-J2 junction link
NODE O 0 0
NODE J1 2800 0
NODE R 3100 -160
NODE J2 3300 0
NODE D 5000 0
EDGE m1 O J1 2800 26.8224 2
EDGE m2 J1 J2 500 26.8224 1
EDGE r1 J1 R 320 22.352 1
EDGE r2 R J2 320 22.352 1
EDGE m3 J2 D 1700 26.8224 2
)";

constexpr std::string_view kMidlink = R"(# midlink: breakdown in the middle of link A-B
NODE O 0 0
NODE A 2500 0
NODE C 3500 400
NODE B 4500 0
NODE D 5500 0
EDGE m1 O A 2500 26.8224 2
EDGE m2 A B 2000 26.8224 2
EDGE c1 A C 1080 26.8224 1
EDGE c2 C B 1080 26.8224 1
EDGE m3 B D 1000 26.8224 2
)";

}  // namespace

std::vector<std::string> builtin_network_names() { return {"junction", "midlink"}; }

std::string_view builtin_network_text(std::string_view name) {
  if (name == "junction") return kJunction;
  if (name == "midlink") return kMidlink;
  throw NetworkError(fmt::format("unknown built-in network '{}'", name));
}

RoadNetwork builtin_network(std::string_view name) {
  return parse_network_text(builtin_network_text(name), fmt::format("builtin:{}", name));
}

}  // namespace cvr
