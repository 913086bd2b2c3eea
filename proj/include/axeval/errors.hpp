#pragma once

#include <stdexcept>
#include <string>

namespace axeval {

// Invalid hyperparameters, flags, or feature names.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad or missing input data (CSV ingestion, non-finite values, empty sets).
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Operation requires a capability the model does not have (e.g. gradients).
class CapabilityError : public std::runtime_error {
public:
  explicit CapabilityError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace axeval
