#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>

namespace ulrich {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in incompatible rings (arity, prime or order differ).
class RingMismatch : public Error {
 public:
  using Error::Error;
};

/// Input violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Text input could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A randomized construction failed to produce a generic instance.
class GenericityFailure : public Error {
 public:
  using Error::Error;
};

/// A computation exceeded its time budget.
class Timeout : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed; indicates an engine bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// Optional wall-clock deadline honoured by long-running loops on this
/// thread. Install with DeadlineScope.
inline thread_local std::optional<std::chrono::steady_clock::time_point> current_deadline;

inline void check_deadline() {
  if (current_deadline && std::chrono::steady_clock::now() > *current_deadline) {
    throw Timeout("time budget exhausted");
  }
}

class DeadlineScope {
 public:
  explicit DeadlineScope(std::chrono::milliseconds budget) : saved_(current_deadline) {
    auto d = std::chrono::steady_clock::now() + budget;
    if (!current_deadline || d < *current_deadline) current_deadline = d;
  }
  ~DeadlineScope() { current_deadline = saved_; }
  DeadlineScope(const DeadlineScope&) = delete;
  DeadlineScope& operator=(const DeadlineScope&) = delete;

 private:
  std::optional<std::chrono::steady_clock::time_point> saved_;
};

}  // namespace ulrich
