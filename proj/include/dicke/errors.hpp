#pragma once

#include <stdexcept>
#include <string>

namespace dicke {

// Error taxonomy mirrored by the CLI exit codes:
//   ConfigError -> 1, NumericalError -> 2, IoError -> 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dicke
