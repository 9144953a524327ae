#pragma once

#include <stdexcept>
#include <string>

namespace wrts {

class ArtifactError : public std::runtime_error {
 public:
  enum class Kind { VersionMismatch, Malformed, Missing };

  ArtifactError(Kind kind, const std::string& message, int line = 0)
      : std::runtime_error(line > 0 ? message + " (line " + std::to_string(line) + ")" : message),
        kind_(kind),
        line_(line) {}

  Kind kind() const { return kind_; }
  int line() const { return line_; }

 private:
  Kind kind_;
  int line_;
};

}  // namespace wrts
