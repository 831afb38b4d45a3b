#pragma once

#include <stdexcept>
#include <string>

namespace klcells {

// Invalid input: bad type names, malformed expressions, contract violations
// detected at an API boundary. The CLI maps this to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured resource limit was hit (element cap, integer overflow).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal consistency check failed. Never caused by valid input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace klcells
