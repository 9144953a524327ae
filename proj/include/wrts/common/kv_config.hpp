#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wrts {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat "key = value" document. Blank lines and lines starting with '#' are
/// ignored; a repeated key is an error.
using KeyValues = std::map<std::string, std::string, std::less<>>;

KeyValues parse_key_values(std::string_view text);
KeyValues load_key_values(const std::filesystem::path& path);

int parse_int(std::string_view key, std::string_view value);
long long parse_int64(std::string_view key, std::string_view value);
double parse_real(std::string_view key, std::string_view value);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace wrts
