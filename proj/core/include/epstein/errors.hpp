#pragma once

#include <stdexcept>
#include <string>

namespace epstein {

// Parameter outside the documented domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Configuration rejected by the runner (bad flag, bad config file).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation hit a budget (node count, quadrature depth, iteration cap).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Should not happen for valid input; e.g. no prime found after bounded retries.
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace epstein
