#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vexlab {

/// Malformed expression text. `offset()` is the byte offset where parsing stopped.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// A real-valued evaluation left its domain (log of a non-positive number, 0^-1, ...).
class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& what, std::string subexpression, double at)
      : std::runtime_error(what + " in '" + subexpression + "' at x=" + std::to_string(at)),
        subexpression_(std::move(subexpression)),
        at_(at) {}

  const std::string& subexpression() const noexcept { return subexpression_; }
  double at() const noexcept { return at_; }

 private:
  std::string subexpression_;
  double at_;
};

/// Iterative refinement stopped without meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double previous, double last)
      : std::runtime_error(what + " (last estimates " + std::to_string(previous) + ", " +
                           std::to_string(last) + ")"),
        previous_(previous),
        last_(last) {}

  double previous() const noexcept { return previous_; }
  double last() const noexcept { return last_; }

 private:
  double previous_;
  double last_;
};

/// The requested operation is not available for this kind of input.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A modular stayed infinite for every scaling tried.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid catalog entry or configuration value.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::string pointer = {})
      : std::runtime_error(pointer.empty() ? what : pointer + ": " + what),
        pointer_(std::move(pointer)) {}

  /// JSON pointer of the offending value, when known.
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace vexlab
