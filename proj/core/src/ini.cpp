#include "ini.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <cctype>
#include <charconv>
#include <cmath>
#include <iterator>
#include <sstream>

#include "cvr/error.hpp"

namespace cvr::ini {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

Section::Section(std::string name, const boost::property_tree::ptree& body)
    : name_(std::move(name)), body_(&body) {}

std::optional<std::string> Section::take(std::string_view key) {
  for (const auto& [k, v] : *body_) {
    if (k == key) {
      taken_.emplace(key);
      return trim(v.data());
    }
  }
  return std::nullopt;
}

void Section::fail(std::string_view key, std::string_view message) const {
  throw ConfigError(fmt::format("{}.{}: {}", name_, key, message));
}

std::string Section::text(std::string_view key, const std::string& fallback) {
  auto v = take(key);
  return v ? *v : fallback;
}

double Section::number(std::string_view key, double fallback) {
  auto v = take(key);
  if (!v) return fallback;
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size() || !std::isfinite(out)) {
    fail(key, fmt::format("expected a number, got '{}'", *v));
  }
  return out;
}

std::int64_t Section::integer(std::string_view key, std::int64_t fallback) {
  auto v = take(key);
  if (!v) return fallback;
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) {
    fail(key, fmt::format("expected an integer, got '{}'", *v));
  }
  return out;
}

std::optional<std::uint64_t> Section::unsigned_integer(std::string_view key) {
  auto v = take(key);
  if (!v) return std::nullopt;
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) {
    fail(key, fmt::format("expected a nonnegative integer, got '{}'", *v));
  }
  return out;
}

std::uint64_t Section::unsigned_integer(std::string_view key, std::uint64_t fallback) {
  return unsigned_integer(key).value_or(fallback);
}

bool Section::boolean(std::string_view key, bool fallback) {
  auto v = take(key);
  if (!v) return fallback;
  std::string s = *v;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  fail(key, fmt::format("expected true/false, got '{}'", *v));
}

void Section::finish() const {
  for (const auto& [k, v] : *body_) {
    if (taken_.count(k) == 0) fail(k, "unknown key");
  }
}

Document read(std::istream& in, std::string_view source_name) {
  const std::string text(std::istreambuf_iterator<char>(in), {});
  Document doc;
  try {
    std::istringstream body(text);
    boost::property_tree::ini_parser::read_ini(body, doc.tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(fmt::format("{}:{}: {}", source_name, e.line(), e.message()));
  }
  for (const auto& [k, v] : doc.tree) {
    if (v.empty() && !v.data().empty()) {
      throw ConfigError(fmt::format("{}: key '{}' outside of a section", source_name, k));
    }
  }
  // The parser drops sections without keys; list headers from the text.
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const std::string t = trim(line);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']') continue;
    std::string name = trim(std::string_view(t).substr(1, t.size() - 2));
    if (doc.tree.find(name) == doc.tree.not_found()) doc.tree.push_back({name, {}});
    doc.sections.push_back(std::move(name));
  }
  return doc;
}

std::string format_number(double value) { return fmt::format("{}", value); }

}  // namespace cvr::ini
