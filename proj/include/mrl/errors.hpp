#pragma once

#include <stdexcept>
#include <string>

namespace mrl {

// Error taxonomy mirrors the CLI exit codes: config/validation -> 2,
// numeric/domain -> 3, file I/O and parsing -> 4.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mrl
