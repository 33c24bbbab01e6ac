#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pulsesq {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a degenerate block of the Bloch-Messiah reduction stays off-diagonal.
struct DegeneracyError : InvariantViolation {
  DegeneracyError(const std::string& what, std::vector<int> block, double off_diagonal)
      : InvariantViolation(what), block(std::move(block)), off_diagonal(off_diagonal) {}
  std::vector<int> block;
  double off_diagonal;
};

}  // namespace pulsesq
