#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace prefwatch {

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when the undiscounted Bellman fixed point does not exist (the MDP is
/// not proper, so values grow without bound).
class DivergentMdp : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the averaging predictor when some action has never been observed.
class NotYetExplored : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Experiment configuration failed validation. Carries every problem found,
/// each prefixed with the JSON path of the offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

}  // namespace prefwatch
