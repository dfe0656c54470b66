#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace smoothcvx {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position()` is a 0-based byte offset.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error("parse error at " + std::to_string(position) + ": " + message), position_(position) {}

  [[nodiscard]] std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// An expression that would need a composition rule the ruleset does not grant.
class ConvexityError : public Error {
 public:
  ConvexityError(std::string node, std::string rule)
      : Error("convexity rule violated at " + node + ": " + rule),
        node_(std::move(node)),
        rule_(std::move(rule)) {}

  [[nodiscard]] const std::string& node() const noexcept { return node_; }
  [[nodiscard]] const std::string& rule() const noexcept { return rule_; }

 private:
  std::string node_;
  std::string rule_;
};

/// Dimension mismatches, degenerate domains, points outside a domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Raised when an analytic Lipschitz bound cannot be certified on a region.
class UnboundedError : public Error {
 public:
  using Error::Error;
};

/// A point whose certified stratum exceeds the configured chain length.
class StratumOverflow : public Error {
 public:
  StratumOverflow(double required_bound, int max_stratum)
      : Error("stratum overflow: certified Lipschitz bound " + std::to_string(required_bound) +
              " exceeds max stratum " + std::to_string(max_stratum)),
        required_bound_(required_bound),
        max_stratum_(max_stratum) {}

  [[nodiscard]] double required_bound() const noexcept { return required_bound_; }
  [[nodiscard]] int max_stratum() const noexcept { return max_stratum_; }

 private:
  double required_bound_;
  int max_stratum_;
};

}  // namespace smoothcvx
