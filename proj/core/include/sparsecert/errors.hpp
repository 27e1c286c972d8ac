#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sparsecert {

/// Malformed or inconsistent arguments (dimension mismatch, empty support, bad file).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Ensemble configuration that cannot produce a valid instance.
class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exhaustive enumeration would exceed the allowed number of supports.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t combinations)
      : std::runtime_error(what), combinations_(combinations) {}

  std::uint64_t combinations() const noexcept { return combinations_; }

 private:
  std::uint64_t combinations_;
};

/// A mathematically guaranteed property failed to hold; indicates a bug.
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace sparsecert
