#pragma once

#include <stdexcept>

namespace mca {

// non-finite values where finite ones are required (NaN abort paths)
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// bad configuration file, schema violation, malformed input file
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// statistically undefined result (e.g. correlation of a constant signal)
struct MetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mca
