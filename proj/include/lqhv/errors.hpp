#pragma once

#include <stdexcept>
#include <string>

namespace lqhv {

enum class ErrorKind {
  size,
  shape,
  argument,
  hermiticity,
  purity,
  trivial_functional,
  internal,
  parse,
  io,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for all domain failures; `kind()` lets the CLI map
// failures onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace lqhv
