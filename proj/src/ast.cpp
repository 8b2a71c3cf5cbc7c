// SPDX-License-Identifier: Apache-2.0

#include "palgol/ast.hpp"

namespace palgol {

std::optional<AccOp> reduceAccOp(ReduceFunc f) {
  switch (f) {
    case ReduceFunc::Minimum: return AccOp::Min;
    case ReduceFunc::Maximum: return AccOp::Max;
    case ReduceFunc::Sum: return AccOp::Sum;
    case ReduceFunc::Product: return AccOp::Product;
    case ReduceFunc::Or: return AccOp::Or;
    case ReduceFunc::And: return AccOp::And;
    case ReduceFunc::None: break;
  }
  return std::nullopt;
}

const char* reduceName(ReduceFunc f) {
  switch (f) {
    case ReduceFunc::Minimum: return "minimum";
    case ReduceFunc::Maximum: return "maximum";
    case ReduceFunc::Sum: return "sum";
    case ReduceFunc::Product: return "product";
    case ReduceFunc::Or: return "or";
    case ReduceFunc::And: return "and";
    case ReduceFunc::None: break;
  }
  return "";
}

std::optional<AccOp> assignAccOp(AssignOp op) {
  switch (op) {
    case AssignOp::Sum: return AccOp::Sum;
    case AssignOp::Min: return AccOp::Min;
    case AssignOp::Max: return AccOp::Max;
    case AssignOp::Or: return AccOp::Or;
    case AssignOp::And: return AccOp::And;
    case AssignOp::Product: return AccOp::Product;
    case AssignOp::Set: break;
  }
  return std::nullopt;
}

AssignOp assignOpFor(AccOp op) {
  switch (op) {
    case AccOp::Sum: return AssignOp::Sum;
    case AccOp::Min: return AssignOp::Min;
    case AccOp::Max: return AssignOp::Max;
    case AccOp::Or: return AssignOp::Or;
    case AccOp::And: return AssignOp::And;
    case AccOp::Product: return AssignOp::Product;
  }
  return AssignOp::Set;
}

const char* assignOpSymbol(AssignOp op) {
  if (auto acc = assignAccOp(op)) return accOpSymbol(*acc);
  return ":=";
}

ExprPtr makeExpr(Expr e) { return std::make_unique<const Expr>(std::move(e)); }
StmtPtr makeStmt(Stmt s) { return std::make_unique<const Stmt>(std::move(s)); }

}  // namespace palgol
