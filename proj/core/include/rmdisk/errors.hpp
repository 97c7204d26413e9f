#pragma once

#include <stdexcept>
#include <string>

namespace rmdisk {

// Error families map one-to-one onto CLI exit codes (see tools/).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A per-mode operator inversion hit a near-resonance (condition number too large).
class ResonanceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace rmdisk
