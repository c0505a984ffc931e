#pragma once

#include <stdexcept>
#include <string>

namespace lspace {

// Malformed or dimensionally inconsistent input. Distinct from a mathematical
// failure (an axiom that does not hold), which is reported through a
// ValidationReport / certificate rather than thrown.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// A truncation cap (word length or polynomial degree) was exceeded by a
// nonzero term. Results are never silently truncated.
class CapOverflowError : public std::runtime_error {
 public:
  explicit CapOverflowError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace lspace
