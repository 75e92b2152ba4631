#pragma once

#include <stdexcept>
#include <string>

namespace cech {

// Invalid input data: broken invariants, malformed files, mismatched spaces.
// Maps to CLI exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// An exhaustive enumeration would exceed the configured budget.
// Maps to CLI exit code 3.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// A postcondition the library guarantees was found violated. Maps to CLI
// exit code 4; seeing one of these is a bug.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

// Outcome of a structural check, with the first failure spelled out.
struct CheckResult {
  bool ok = true;
  std::string diagnostic;

  explicit operator bool() const { return ok; }
  static CheckResult pass() { return {true, ""}; }
  static CheckResult fail(std::string why) { return {false, std::move(why)}; }
};

}  // namespace cech
