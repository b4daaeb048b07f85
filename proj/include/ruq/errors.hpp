#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ruq {

// Shape or argument mismatch at an API boundary.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Distribution parameters or evaluation points outside their support.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Bad experiment / data configuration (eta out of range, degenerate splits, unknown keys).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// CSV or config text that cannot be parsed. Row and column are 1-based; 0 means "not applicable".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t row = 0, std::size_t column = 0)
      : std::runtime_error(what), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

// Training produced a non-finite loss. Carries the loss history up to (excluding) the failing iteration.
class TrainingDivergence : public std::runtime_error {
 public:
  TrainingDivergence(std::size_t iteration, std::vector<double> history)
      : std::runtime_error("training diverged: non-finite loss at iteration " +
                           std::to_string(iteration)),
        iteration_(iteration),
        history_(std::move(history)) {}

  std::size_t iteration() const noexcept { return iteration_; }
  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::size_t iteration_;
  std::vector<double> history_;
};

}  // namespace ruq
