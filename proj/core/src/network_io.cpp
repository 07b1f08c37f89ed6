#include "cvr/network_io.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <vector>

#include "cvr/error.hpp"

namespace cvr {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

template <typename T>
T parse_number(std::string_view text, std::string_view what, std::string_view where) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw NetworkError(fmt::format("{}: invalid {} '{}'", where, what, text));
  }
  return value;
}

}  // namespace

RoadNetwork parse_network(std::istream& in, std::string_view source_name) {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    auto fields = split_fields(view);
    if (fields.empty()) continue;
    std::string where = fmt::format("{}:{}", source_name, line_no);
    if (fields[0] == "NODE") {
      if (fields.size() != 4) throw NetworkError(fmt::format("{}: NODE expects 3 fields", where));
      nodes.push_back({std::string(fields[1]), parse_number<double>(fields[2], "x", where),
                       parse_number<double>(fields[3], "y", where)});
    } else if (fields[0] == "EDGE") {
      if (fields.size() != 7) throw NetworkError(fmt::format("{}: EDGE expects 6 fields", where));
      edges.push_back({std::string(fields[1]), std::string(fields[2]), std::string(fields[3]),
                       parse_number<double>(fields[4], "length", where),
                       parse_number<double>(fields[5], "speed limit", where),
                       parse_number<int>(fields[6], "lane count", where)});
    } else {
      throw NetworkError(fmt::format("{}: unknown record type '{}'", where, fields[0]));
    }
  }
  try {
    return RoadNetwork::build(std::move(nodes), std::move(edges));
  } catch (const NetworkError& e) {
    throw NetworkError(fmt::format("{}: {}", source_name, e.what()));
  }
}

RoadNetwork parse_network_text(std::string_view text, std::string_view source_name) {
  std::istringstream in{std::string(text)};
  return parse_network(in, source_name);
}

RoadNetwork load_network_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NetworkError(fmt::format("cannot open network file {}", path.string()));
  return parse_network(in, path.string());
}

std::string serialize_network(const RoadNetwork& net) {
  std::string out;
  for (const Node& n : net.nodes()) {
    out += fmt::format("NODE {} {} {}\n", n.id, n.x, n.y);
  }
  for (const Edge& e : net.edges()) {
    out += fmt::format("EDGE {} {} {} {} {} {}\n", e.id, e.from, e.to, e.length, e.speed_limit,
                       e.lane_count);
  }
  return out;
}

void save_network_file(const RoadNetwork& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw NetworkError(fmt::format("cannot write network file {}", path.string()));
  out << serialize_network(net);
}

}  // namespace cvr
