#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cvr/network.hpp"

namespace cvr {

// Synthetic test networks. Both run from node O to node D.
//
// junction: two-lane mainline into a single-lane junction link J1->J2, with
//   a slower off/on-ramp pair J1->R->J2 as the alternative.
// midlink: two-lane mainline whose middle link A->B has a parallel
//   alternative A->C->B.
std::vector<std::string> builtin_network_names();
/// Network file text of a built-in network; throws cvr::NetworkError for an
/// unknown name.
std::string_view builtin_network_text(std::string_view name);
RoadNetwork builtin_network(std::string_view name);

}  // namespace cvr
