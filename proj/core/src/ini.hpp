#pragma once

#include <boost/property_tree/ptree.hpp>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace cvr::ini {

/// Keys of one INI section, consumed one by one so leftovers can be
/// reported as unknown.
class Section {
 public:
  Section(std::string name, const boost::property_tree::ptree& body);

  const std::string& name() const { return name_; }

  std::optional<std::string> take(std::string_view key);
  std::string text(std::string_view key, const std::string& fallback);
  double number(std::string_view key, double fallback);
  std::int64_t integer(std::string_view key, std::int64_t fallback);
  std::uint64_t unsigned_integer(std::string_view key, std::uint64_t fallback);
  std::optional<std::uint64_t> unsigned_integer(std::string_view key);
  bool boolean(std::string_view key, bool fallback);

  /// Throws cvr::ConfigError naming the first key never taken.
  void finish() const;

  [[noreturn]] void fail(std::string_view key, std::string_view message) const;

 private:
  std::string name_;
  const boost::property_tree::ptree* body_;
  std::set<std::string, std::less<>> taken_;
};

struct Document {
  boost::property_tree::ptree tree;
  std::vector<std::string> sections;  // in file order
};

/// Reads INI text; rejects keys outside a section.
Document read(std::istream& in, std::string_view source_name);

/// Shortest round-trip text of a double.
std::string format_number(double value);

}  // namespace cvr::ini
