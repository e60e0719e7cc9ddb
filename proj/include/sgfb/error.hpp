#pragma once

#include <stdexcept>
#include <string>

namespace sgfb {

// Malformed input (graph text, CSV files, bad arguments).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Size / divisibility / precondition violations.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A transform or filter set failed its own validation (PR, symmetry, realness).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Eigen-solver failure, connectivity failure after retries, and similar.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sgfb
