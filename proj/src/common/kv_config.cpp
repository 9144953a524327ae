#include "wrts/common/kv_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace wrts {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!out.emplace(std::string(key), std::string(value)).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
    }
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

KeyValues load_key_values(const std::filesystem::path& path) {
  return parse_key_values(read_text_file(path));
}

long long parse_int64(std::string_view key, std::string_view value) {
  long long v = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("key '" + std::string(key) + "': expected an integer, got '" + std::string(value) + "'");
  }
  return v;
}

int parse_int(std::string_view key, std::string_view value) {
  const long long v = parse_int64(key, value);
  if (v < INT32_MIN || v > INT32_MAX) throw ConfigError("key '" + std::string(key) + "': out of range");
  return static_cast<int>(v);
}

double parse_real(std::string_view key, std::string_view value) {
  double v = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("key '" + std::string(key) + "': expected a number, got '" + std::string(value) + "'");
  }
  return v;
}

}  // namespace wrts
