#pragma once

#include <stdexcept>
#include <string>

namespace satcc {

// Raised for malformed configuration (bad field values, unknown names,
// unsatisfiable scenario constraints). The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace satcc
