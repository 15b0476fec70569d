#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace blochlab {

// Argument outside the documented domain (t <= 0, |z| >= 1, ...).
struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

// A hypothesis required by an operation does not hold for the inputs.
struct precondition_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed DSL string. position is a 0-based byte offset into the input.
struct parse_error : std::runtime_error {
  parse_error(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
  std::size_t position;
};

// A numeric routine failed to reach its tolerance; carries the partial value.
struct numeric_error : std::runtime_error {
  numeric_error(const std::string& what, double partial_value)
      : std::runtime_error(what), partial(partial_value) {}
  double partial;
};

// Request exceeds a hard resource limit (e.g. exhaustive enumeration size).
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace blochlab
