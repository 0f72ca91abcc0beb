// Source positions, collected diagnostics, and the error types thrown by
// the front end, the policy loader, and the evaluator.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace chorsec {

struct Span {
  int line = 0;
  int col = 0;

  bool valid() const { return line > 0; }
  bool operator==(const Span&) const = default;
};

struct Diagnostic {
  Span span;
  std::string message;
};

std::string render_diagnostics(const std::vector<Diagnostic>& diags,
                               const std::string& file);

class ParseError : public std::runtime_error {
 public:
  ParseError(Span span, const std::string& message)
      : std::runtime_error(message), span(span) {}
  Span span;
};

class PolicyError : public std::runtime_error {
 public:
  explicit PolicyError(const std::string& message, int line = 0)
      : std::runtime_error(message), line(line) {}
  int line;
};

// Raised when expression evaluation cannot produce a value (unbound
// variable, unknown function, arity mismatch, or strict-mode failures).
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StepError : public std::runtime_error {
 public:
  enum class Kind { Terminated, Stuck, BadIndex };
  StepError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind(kind) {}
  Kind kind;
};

}  // namespace chorsec
