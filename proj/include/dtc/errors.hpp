#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dtc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a plant state leaves the blow-up bound.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(const std::string& what, std::int64_t cycle = -1)
      : std::runtime_error(what), cycle_(cycle) {}

  std::int64_t cycle() const { return cycle_; }

 private:
  std::int64_t cycle_;
};

/// Flux vector is exactly zero, so no angle or sector exists.
class DegenerateFluxError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace dtc
