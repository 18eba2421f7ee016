#pragma once

#include <stdexcept>
#include <string>

namespace lct {

// Invalid value or violated precondition in library input.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Request exceeds a documented size cap (cube width, dimension, ...).
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Process exit codes shared by the CLI and the test drivers.
enum ExitCode : int {
  kExitOk = 0,
  kExitAssertionFailed = 1,
  kExitUsage = 2,
  kExitCapacity = 3,
};

}  // namespace lct
