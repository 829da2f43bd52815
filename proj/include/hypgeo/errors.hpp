#pragma once

#include <stdexcept>
#include <string>

namespace hypgeo {

// Each error family maps onto one CLI exit code (see tools/hypgeo.cpp).

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingArtifactError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalInstabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

struct CacheError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hypgeo
