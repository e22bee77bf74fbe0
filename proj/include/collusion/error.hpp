#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace collusion {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A (reviewer, product) pair inside a claimed biclique has no rating edge.
class MissingEdge : public Error {
 public:
  MissingEdge(std::string reviewer, std::string product)
      : Error("missing edge (" + reviewer + ", " + product + ")"),
        reviewer_(std::move(reviewer)),
        product_(std::move(product)) {}

  const std::string& reviewer() const noexcept { return reviewer_; }
  const std::string& product() const noexcept { return product_; }

 private:
  std::string reviewer_;
  std::string product_;
};

/// A second edge was offered for a (reviewer, product) pair already present.
class DuplicateEdge : public Error {
 public:
  using Error::Error;
};

/// Malformed input record or snapshot line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line), reason_(reason) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

class EmptyLog : public Error {
 public:
  EmptyLog() : Error("rating log is empty") {}
};

/// Enumeration produced more groups than the configured cap.
class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(std::size_t count)
      : Error("candidate budget exceeded after " + std::to_string(count) + " groups"),
        count_(count) {}

  std::size_t count() const noexcept { return count_; }

 private:
  std::size_t count_;
};

class GroupTooSmall : public Error {
 public:
  GroupTooSmall() : Error("group has fewer than two reviewers") {}
};

/// Invalid configuration value. BadWeights is the most common case.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class BadWeights : public ConfigError {
 public:
  explicit BadWeights(double sum)
      : ConfigError("indicator weights must be non-negative and sum to 1 (sum = " +
                    std::to_string(sum) + ")"),
        sum_(sum) {}

  double sum() const noexcept { return sum_; }

 private:
  double sum_;
};

class InfeasibleScript : public Error {
 public:
  using Error::Error;
};

}  // namespace collusion
