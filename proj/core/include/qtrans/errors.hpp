#pragma once

#include <stdexcept>
#include <string>

namespace qtrans {

/// Precondition / configuration violations (CLI exit code 2).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structured mathematical failure: the computation ran as specified but the
/// mathematical goal was not reached (budget exhausted, no admissible D,
/// schedule underflow, ...). Carries a JSON diagnostics string so callers can
/// surface the best partial result (CLI exit code 1).
class MathFailure : public std::runtime_error {
 public:
  MathFailure(const std::string& what, std::string diagnostics_json = "{}")
      : std::runtime_error(what), diagnostics_(std::move(diagnostics_json)) {}
  const std::string& diagnostics() const { return diagnostics_; }

 private:
  std::string diagnostics_;
};

}  // namespace qtrans
