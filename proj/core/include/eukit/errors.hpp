#pragma once

#include <stdexcept>
#include <string>

namespace eukit {

// Input lies outside the mathematical domain of an operation (e.g. a
// non-positive coordinate, a perturbation crossing the orthant boundary).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Probability weights that do not sum to one within tolerance.
class NormalizationError : public std::runtime_error {
 public:
  explicit NormalizationError(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration: unknown family name, invalid parameter, malformed config file.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Vector/matrix sizes inconsistent with the declared dimensions.
class DimensionError : public std::runtime_error {
 public:
  explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace eukit
