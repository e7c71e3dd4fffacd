#pragma once

#include <stdexcept>
#include <string>

namespace epflow {

// Base class for all library errors.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed arguments: bad shapes, out-of-range orders, invalid parameters.
class invalid_input : public error {
 public:
  explicit invalid_input(const std::string& msg) : error(msg) {}
};

// File-level problems: unreadable or malformed specification files.
class parse_error : public error {
 public:
  explicit parse_error(const std::string& msg) : error(msg) {}
};

// A numeric routine could not reach the requested accuracy. Carries the best
// value it obtained together with the error estimate at the point of failure.
class accuracy_error : public error {
 public:
  accuracy_error(const std::string& msg, double best_value, double error_estimate)
      : error(msg), best_value_(best_value), error_estimate_(error_estimate) {}

  double best_value() const { return best_value_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double best_value_;
  double error_estimate_;
};

}  // namespace epflow
