#pragma once

#include <stdexcept>
#include <string>

namespace fbs {

// Violated mathematical/physical precondition (bad exponent range, grid
// mismatch, odd N, ...). The CLI maps this to exit code 2.
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Malformed configuration document. The message names the offending field.
// The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem / serialization failure, message carries the path.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Raised by the time marcher when the solution norm exceeds the blow-up
// guard. Carries a human-readable diagnostic.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double time, double norm)
      : std::runtime_error(what), time(time), norm(norm) {}
  double time;
  double norm;
};

}  // namespace fbs
