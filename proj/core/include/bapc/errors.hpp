#pragma once

#include <stdexcept>
#include <string>

namespace bapc {

/// Invalid configuration, precondition violation, or malformed input file.
struct ConfigError : std::invalid_argument {
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A fitting procedure could not produce a usable model.
struct FitError : std::runtime_error {
  explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure outside of fitting (conversions, quadrature, attribution).
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bapc
