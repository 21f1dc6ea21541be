#pragma once

#include <stdexcept>
#include <string>

namespace mscs {

// Operand shapes disagree or a size precondition is violated.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A scalar parameter is out of range (negative threshold, non-positive SNR, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input contains NaN or infinity where finite values are required.
class NonFiniteError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed configuration or data file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mscs
