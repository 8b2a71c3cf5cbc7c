// SPDX-License-Identifier: Apache-2.0
//
// Abstract syntax of vertex-centric programs: steps composed by sequencing
// and fixed-point iteration, plus stop-steps that freeze vertices.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "palgol/error.hpp"
#include "palgol/value.hpp"

namespace palgol {

enum class ReduceFunc : std::uint8_t { None, Minimum, Maximum, Sum, Product, Or, And };

/// The AccOp a reduce function folds with.
std::optional<AccOp> reduceAccOp(ReduceFunc f);
const char* reduceName(ReduceFunc f);

struct Expr;
using ExprPtr = std::unique_ptr<const Expr>;

struct Expr {
  enum class Kind : std::uint8_t {
    IntLit,
    FloatLit,
    BoolLit,
    Inf,
    Var,
    Fst,          // fst kids[0]
    Snd,          // snd kids[0]
    MakePair,     // (kids[0], kids[1])
    Ref,          // kids[0].ref
    Val,          // kids[0].val
    MakeRefVal,   // {kids[0], kids[1]}
    Singleton,    // {kids[0]}; parsed, rejected by validation
    Cond,         // kids[0] ? kids[1] : kids[2]
    Binary,
    Unary,
    Field,        // name[kids[0]]
    Comprehension // reduce[kids[0] | name <- kids[1], kids[2..]]
  };

  Kind kind;
  Span span;
  std::int64_t intValue = 0;
  double floatValue = 0;
  bool boolValue = false;
  std::string name;  // variable, field, or generator variable
  BinOp binOp = BinOp::Add;
  UnOp unOp = UnOp::Neg;
  ReduceFunc reduce = ReduceFunc::None;
  std::vector<ExprPtr> kids;

  const Expr& kid(std::size_t i) const { return *kids[i]; }
  // Comprehension accessors.
  const Expr& body() const { return *kids[0]; }
  const Expr& source() const { return *kids[1]; }
  std::size_t guardCount() const { return kids.size() - 2; }
  const Expr& guard(std::size_t i) const { return *kids[i + 2]; }
};

enum class AssignOp : std::uint8_t { Set, Sum, Min, Max, Or, And, Product };

std::optional<AccOp> assignAccOp(AssignOp op);
AssignOp assignOpFor(AccOp op);
const char* assignOpSymbol(AssignOp op);

struct Stmt;
using StmtPtr = std::unique_ptr<const Stmt>;
using Block = std::vector<StmtPtr>;

struct Stmt {
  enum class Kind : std::uint8_t { If, ForEach, Let, LocalAssign, RemoteAssign };

  Kind kind;
  Span span;
  std::string name;        // ForEach/Let variable, or assigned field
  bool localKeyword = false;
  AssignOp op = AssignOp::Set;
  ExprPtr cond;            // If condition, ForEach list, Let value
  ExprPtr target;          // assignment index expression
  ExprPtr rhs;             // assignment value
  Block body;              // If-then, ForEach body
  Block elseBody;
  bool hasElse = false;
};

struct Step {
  Span span;
  std::string vertexVar;
  Block body;
};

struct StopStep {
  Span span;
  std::string vertexVar;
  ExprPtr cond;
};

struct Program;

struct Iter {
  Span span;
  std::unique_ptr<const Program> body;
  std::vector<std::string> fixFields;
};

using ProgramItem = std::variant<Step, StopStep, Iter>;

struct Program {
  std::vector<ProgramItem> items;
};

// Construction helpers used by the parser and tests.
ExprPtr makeExpr(Expr e);
StmtPtr makeStmt(Stmt s);

/// Visits every expression below `e`, including `e` itself (pre-order).
template <typename F>
void forEachExpr(const Expr& e, F&& f) {
  f(e);
  for (const auto& k : e.kids) forEachExpr(*k, f);
}

template <typename F>
void forEachExpr(const Block& block, F&& f);

template <typename F>
void forEachExpr(const Stmt& s, F&& f) {
  for (const Expr* e : {s.cond.get(), s.target.get(), s.rhs.get()})
    if (e) forEachExpr(*e, f);
  forEachExpr(s.body, f);
  forEachExpr(s.elseBody, f);
}

template <typename F>
void forEachExpr(const Block& block, F&& f) {
  for (const auto& s : block) forEachExpr(*s, f);
}

/// Visits every statement below `block` (pre-order).
template <typename F>
void forEachStmt(const Block& block, F&& f) {
  for (const auto& s : block) {
    f(*s);
    forEachStmt(s->body, f);
    forEachStmt(s->elseBody, f);
  }
}

}  // namespace palgol
