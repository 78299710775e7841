#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace topobreak {

// Error taxonomy mirrored by the C API status codes and CLI exit codes.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// All floating-point output uses 17 significant digits so that equal doubles
// serialize to equal bytes.
inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace topobreak
