#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace jetcalc {

// Base of every error the library throws. `kind()` is the stable
// machine-readable tag the CLI maps to exit codes.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

// Rejected DSL source. `position` is a 0-based character offset.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message,
             std::string expected = {})
      : Error("parse", message + " (at offset " + std::to_string(position) + ")"),
        position(position),
        expected(std::move(expected)) {}

  std::size_t position;
  std::string expected;
};

// Evaluation left the domain of an operator (log of a non-positive value,
// division by zero, non-finite result, ...). `component` is the 0-based
// output component where it happened, -1 if not yet attributed.
class DomainError : public Error {
 public:
  DomainError(std::string op, const std::string& message, int component = -1)
      : Error("domain", message),
        op(std::move(op)),
        component(component) {}

  std::string op;
  int component;
};

// Dimension or structural mismatch between values.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& message) : Error("shape", message) {}
};

// Fiber operation applied to points that do not share the structure's anchor.
class AnchorError : public Error {
 public:
  explicit AnchorError(const std::string& message) : Error("anchor", message) {}
};

class UnknownLawError : public Error {
 public:
  explicit UnknownLawError(const std::string& law)
      : Error("unknown_law", "unknown law: " + law), law(law) {}

  std::string law;
};

}  // namespace jetcalc
