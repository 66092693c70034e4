#pragma once

#include <stdexcept>
#include <string>

namespace tdrk {

/// Invalid input: bad parameters, malformed files, unknown names.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown catalog entry or problem name.
class LookupError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// File system failure while reading or writing outputs.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tdrk
