#pragma once

#include <stdexcept>
#include <string>

namespace spdefield {

// Error taxonomy mirrored by the CLI exit codes: config 2, data 3, numerical 4.
// Plain std::invalid_argument is used for precondition violations on library
// entry points.

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace spdefield
