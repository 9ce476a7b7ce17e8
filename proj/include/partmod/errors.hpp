#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace partmod {

// Raised when a computation would exceed the configured memory budget.
// required_bytes is the size the computation asked for (0 if unknown).
class resource_error : public std::runtime_error {
 public:
  resource_error(const std::string& what, std::uint64_t required_bytes)
      : std::runtime_error(what), required_bytes_(required_bytes) {}

  std::uint64_t required_bytes() const noexcept { return required_bytes_; }

 private:
  std::uint64_t required_bytes_;
};

// Raised when an exact value no longer fits the native word it must be
// materialized into (e.g. a period too large to index a window).
class overflow_error : public std::overflow_error {
 public:
  explicit overflow_error(const std::string& what) : std::overflow_error(what) {}
};

// Raised when a computation contradicts a proven statement. This always
// indicates a bug in the engine, never a property of the input.
class theorem_violation : public std::logic_error {
 public:
  explicit theorem_violation(const std::string& what) : std::logic_error(what) {}
};

// Raised when a formula is queried outside its hypothesis.
class not_applicable : public std::domain_error {
 public:
  explicit not_applicable(const std::string& what) : std::domain_error(what) {}
};

}  // namespace partmod
