#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "cvr/network.hpp"

namespace cvr {

// Plain-text network format, one record per line:
//
//   NODE <id> <x> <y>
//   EDGE <id> <from> <to> <length_m> <speed_limit_mps> <lanes>
//
// `#` starts a comment that runs to the end of the line. Numbers are written
// in shortest round-trip form, so parse(serialize(parse(text))) is identical
// to parse(text).

RoadNetwork parse_network(std::istream& in, std::string_view source_name = "<input>");
RoadNetwork parse_network_text(std::string_view text, std::string_view source_name = "<input>");
RoadNetwork load_network_file(const std::filesystem::path& path);

std::string serialize_network(const RoadNetwork& net);
void save_network_file(const RoadNetwork& net, const std::filesystem::path& path);

}  // namespace cvr
