#pragma once

// Run configuration (flat key=value text) and CSV output. Numbers are written
// in the shortest form that reads back to the same double, so output files
// are a pure function of the values.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "ctrw/error.hpp"

namespace ctrw {

inline std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace detail

inline double parse_double(std::string_view text, std::string_view what) {
  const auto s = detail::trim(text);
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || s.empty()) {
    throw usage_error(std::string(what) + ": not a number: '" + std::string(text) + "'");
  }
  return v;
}

inline std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  const auto s = detail::trim(text);
  std::uint64_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || s.empty()) {
    throw usage_error(std::string(what) + ": not a non-negative integer: '" + std::string(text) + "'");
  }
  return v;
}

/// Comma-separated list of numbers.
inline std::vector<double> parse_double_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_double(text.substr(0, comma), what));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

/// Flat key=value settings. '#' starts a comment; blank lines are ignored.
class Config {
 public:
  static Config parse(std::string_view text, std::string_view origin = "config") {
    Config c;
    int line_no = 0;
    while (!text.empty()) {
      ++line_no;
      const auto eol = text.find('\n');
      auto line = text.substr(0, eol);
      text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      const auto key = eq == std::string_view::npos ? line : detail::trim(line.substr(0, eq));
      if (eq == std::string_view::npos || key.empty()) {
        throw usage_error(std::string(origin) + ":" + std::to_string(line_no) +
                          ": expected key=value, got '" + std::string(line) + "'");
      }
      c.set(std::string(key), std::string(detail::trim(line.substr(eq + 1))));
    }
    return c;
  }

  static Config load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw usage_error("cannot read config file '" + path + "'");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse(text, path);
  }

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  bool has(const std::string& key) const { return values_.contains(key); }

  std::string get(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }
  double get_double(const std::string& key, double fallback) const {
    return has(key) ? parse_double(values_.at(key), key) : fallback;
  }
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? parse_u64(values_.at(key), key) : fallback;
  }
  std::vector<double> get_list(const std::string& key, const std::string& fallback) const {
    return parse_double_list(get(key, fallback), key);
  }

  /// Rejects keys outside `allowed`, so a misspelt setting is not silently ignored.
  void require_known(std::span<const std::string_view> allowed) const {
    for (const auto& [key, value] : values_) {
      bool known = false;
      for (auto a : allowed) known = known || a == key;
      if (!known) throw usage_error("unknown config key '" + key + "'");
    }
  }

  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Comma-separated output with one header line and LF terminators.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::string_view header) : out_(path, std::ios::binary) {
    if (!out_) throw usage_error("cannot write '" + path + "'");
    out_ << header << '\n';
  }

  template <class... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ",") << field(fields), first = false), ...);
    out_ << '\n';
  }

  void close() {
    out_.close();
    if (!out_) throw std::runtime_error("write failed");
  }

 private:
  static std::string field(double v) { return format_double(v); }
  static std::string field(int v) { return std::to_string(v); }
  static std::string field(std::uint64_t v) { return std::to_string(v); }
  static std::string field(std::string_view v) { return std::string(v); }

  std::ofstream out_;
};

}  // namespace ctrw
