// Error types shared by every dwlab module.
#pragma once

#include <stdexcept>
#include <string>

namespace dwlab {

enum class ErrorKind { config, usage, divergence, unsupported, convergence };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Invalid or inconsistent input (bad value, CFL violation, parse failure).
struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

/// Caller passed mismatched shapes or too little data.
struct UsageError : Error {
  explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

/// A representation/scheme combination the library does not handle.
struct UnsupportedError : Error {
  explicit UnsupportedError(const std::string& what) : Error(ErrorKind::unsupported, what) {}
};

/// Non-finite values appeared while stepping.
struct DivergenceError : Error {
  DivergenceError(const std::string& what, long step)
      : Error(ErrorKind::divergence, what + " (step " + std::to_string(step) + ")"), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

/// An iterative solve ran out of iterations.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& what, double last_value)
      : Error(ErrorKind::convergence, what), last_value_(last_value) {}
  double last_value() const noexcept { return last_value_; }

 private:
  double last_value_;
};

// Process exit codes used by the CLI: 0 ok, 2 config, 3 numerical, 4 unsupported.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config:
    case ErrorKind::usage:
      return 2;
    case ErrorKind::divergence:
    case ErrorKind::convergence:
      return 3;
    case ErrorKind::unsupported:
      return 4;
  }
  return 1;
}

}  // namespace dwlab
