#pragma once

#include <stdexcept>
#include <string>

namespace rai {

// Bad or unsupported input data (files, formats, values). Maps to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration (missing paths, invalid settings). Maps to exit code 3.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rai
