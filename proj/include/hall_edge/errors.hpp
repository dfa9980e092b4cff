#pragma once

#include <stdexcept>
#include <string>

namespace hall_edge {

// Failure categories. The CLI maps each category to its own exit code.
enum class ErrorKind {
  config,        // malformed run configuration
  precondition,  // domain, index, degenerate-input and unsupported-order errors
  accuracy,      // a numerical method could not reach its tolerance
  resource,      // problem size exceeds the configured budget
  internal,      // NaN or other broken invariant
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::config, w) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorKind::precondition, w) {}
};

struct IndexError : Error {
  explicit IndexError(const std::string& w) : Error(ErrorKind::precondition, w) {}
};

struct DegenerateInputError : Error {
  explicit DegenerateInputError(const std::string& w) : Error(ErrorKind::precondition, w) {}
};

struct UnsupportedOrderError : Error {
  explicit UnsupportedOrderError(const std::string& w) : Error(ErrorKind::precondition, w) {}
};

struct AccuracyError : Error {
  explicit AccuracyError(const std::string& w) : Error(ErrorKind::accuracy, w) {}
};

struct ResourceError : Error {
  explicit ResourceError(const std::string& w) : Error(ErrorKind::resource, w) {}
};

struct InternalError : Error {
  explicit InternalError(const std::string& w) : Error(ErrorKind::internal, w) {}
};

const char* to_string(ErrorKind kind) noexcept;

}  // namespace hall_edge
