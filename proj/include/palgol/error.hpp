// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace palgol {

/// 1-based source position; line 0 means "no location".
struct Span {
  int line = 0;
  int column = 0;
};

struct Diagnostic {
  Span span;
  std::string message;

  /// Renders as `file:line:col: message`.
  std::string format(const std::string& file) const;
};

/// Raised by the lexer, parser, type checker, validator and planner.
class CompileError : public std::runtime_error {
 public:
  explicit CompileError(std::vector<Diagnostic> diags);
  CompileError(Span span, const std::string& message)
      : CompileError(std::vector<Diagnostic>{{span, message}}) {}

  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

class PlanningError : public CompileError {
 public:
  using CompileError::CompileError;
};

/// Raised while executing a program on a graph.
class RuntimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A fixed-point loop or superstep budget was exhausted.
class DivergenceError : public RuntimeError {
 public:
  using RuntimeError::RuntimeError;
};

/// Malformed graph file or infeasible generator request.
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace palgol
