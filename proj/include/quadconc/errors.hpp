#pragma once

#include <stdexcept>
#include <string>

namespace quadconc {

// Bad user input: malformed files, dimension mismatches, out-of-range
// parameters. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A computation that could not be completed: iteration cap reached,
// moment overflow where a finite value is required. CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace quadconc
