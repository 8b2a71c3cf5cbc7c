// SPDX-License-Identifier: Apache-2.0

#include "palgol/printer.hpp"

#include <charconv>
#include <sstream>

namespace palgol {

namespace {

enum Prec { kTernary = 1, kOr, kAnd, kCmp, kAdd, kMul, kUnary, kPostfix, kPrimary };

int binPrec(BinOp op) {
  switch (op) {
    case BinOp::Or: return kOr;
    case BinOp::And: return kAnd;
    case BinOp::Add:
    case BinOp::Sub: return kAdd;
    case BinOp::Mul:
    case BinOp::Div:
    case BinOp::Mod: return kMul;
    default: return kCmp;
  }
}

int precOf(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Cond: return kTernary;
    case Expr::Kind::Binary: return binPrec(e.binOp);
    case Expr::Kind::Unary:
    case Expr::Kind::Fst:
    case Expr::Kind::Snd: return kUnary;
    case Expr::Kind::Ref:
    case Expr::Kind::Val: return kPostfix;
    default: return kPrimary;
  }
}

std::string floatLiteral(double d) {
  char buf[128];
  auto res = std::to_chars(buf, buf + sizeof(buf), d, std::chars_format::fixed);
  std::string s(buf, res.ptr);
  if (s.find('.') == std::string::npos) s += ".0";
  return s;
}

std::string print(const Expr& e, int minPrec);

std::string printInner(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::IntLit: return std::to_string(e.intValue);
    case Expr::Kind::FloatLit: return floatLiteral(e.floatValue);
    case Expr::Kind::BoolLit: return e.boolValue ? "true" : "false";
    case Expr::Kind::Inf: return "inf";
    case Expr::Kind::Var: return e.name;
    case Expr::Kind::Fst: return "fst " + print(e.kid(0), kUnary);
    case Expr::Kind::Snd: return "snd " + print(e.kid(0), kUnary);
    case Expr::Kind::MakePair: return "(" + print(e.kid(0), kTernary) + ", " + print(e.kid(1), kTernary) + ")";
    case Expr::Kind::Ref: return print(e.kid(0), kPostfix) + ".ref";
    case Expr::Kind::Val: return print(e.kid(0), kPostfix) + ".val";
    case Expr::Kind::MakeRefVal: return "{" + print(e.kid(0), kTernary) + ", " + print(e.kid(1), kTernary) + "}";
    case Expr::Kind::Singleton: return "{" + print(e.kid(0), kTernary) + "}";
    case Expr::Kind::Cond:
      return print(e.kid(0), kOr) + " ? " + print(e.kid(1), kTernary) + " : " + print(e.kid(2), kTernary);
    case Expr::Kind::Binary: {
      int p = binPrec(e.binOp);
      int lhs = p == kCmp ? kCmp + 1 : p;
      return print(e.kid(0), lhs) + " " + binOpSymbol(e.binOp) + " " + print(e.kid(1), p + 1);
    }
    case Expr::Kind::Unary: return std::string(e.unOp == UnOp::Neg ? "-" : "!") + print(e.kid(0), kUnary);
    case Expr::Kind::Field: return e.name + "[" + print(e.kid(0), kTernary) + "]";
    case Expr::Kind::Comprehension: {
      std::string s = reduceName(e.reduce);
      s += "[" + print(e.body(), kTernary) + " | " + e.name + " <- " + print(e.source(), kTernary);
      for (std::size_t i = 0; i < e.guardCount(); ++i) s += ", " + print(e.guard(i), kTernary);
      return s + "]";
    }
  }
  return "?";
}

std::string print(const Expr& e, int minPrec) {
  std::string s = printInner(e);
  return precOf(e) < minPrec ? "(" + s + ")" : s;
}

void printBlock(std::ostream& os, const Block& b, int indent);

void printStmt(std::ostream& os, const Stmt& s, int indent) {
  std::string pad(indent, ' ');
  switch (s.kind) {
    case Stmt::Kind::If:
      os << pad << "if (" << print(*s.cond, kTernary) << ")\n";
      printBlock(os, s.body, indent + 2);
      if (s.hasElse) {
        os << pad << "else\n";
        printBlock(os, s.elseBody, indent + 2);
      }
      break;
    case Stmt::Kind::ForEach:
      os << pad << "for (" << s.name << " <- " << print(*s.cond, kTernary) << ")\n";
      printBlock(os, s.body, indent + 2);
      break;
    case Stmt::Kind::Let:
      os << pad << "let " << s.name << " = " << print(*s.cond, kTernary) << "\n";
      break;
    case Stmt::Kind::LocalAssign:
    case Stmt::Kind::RemoteAssign:
      os << pad;
      if (s.kind == Stmt::Kind::RemoteAssign) os << "remote ";
      else if (s.localKeyword) os << "local ";
      os << s.name << "[" << print(*s.target, kTernary) << "] " << assignOpSymbol(s.op) << " "
         << print(*s.rhs, kTernary) << "\n";
      break;
  }
}

void printBlock(std::ostream& os, const Block& b, int indent) {
  for (const auto& s : b) printStmt(os, *s, indent);
}

void printProgram(std::ostream& os, const Program& p, int indent) {
  std::string pad(indent, ' ');
  for (const auto& item : p.items) {
    if (const auto* step = std::get_if<Step>(&item)) {
      os << pad << "for " << step->vertexVar << " in V\n";
      printBlock(os, step->body, indent + 2);
      os << pad << "end\n";
    } else if (const auto* stop = std::get_if<StopStep>(&item)) {
      os << pad << "stop " << stop->vertexVar << " where " << print(*stop->cond, kTernary) << "\n";
    } else {
      const auto& it = std::get<Iter>(item);
      os << pad << "do\n";
      printProgram(os, *it.body, indent + 2);
      os << pad << "until fix[";
      for (std::size_t i = 0; i < it.fixFields.size(); ++i) os << (i ? ", " : "") << it.fixFields[i];
      os << "]\n";
    }
  }
}

// ---- tree dump ----

const char* exprTag(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::IntLit: return "int";
    case Expr::Kind::FloatLit: return "float";
    case Expr::Kind::BoolLit: return "bool";
    case Expr::Kind::Inf: return "inf";
    case Expr::Kind::Var: return "var";
    case Expr::Kind::Fst: return "fst";
    case Expr::Kind::Snd: return "snd";
    case Expr::Kind::MakePair: return "pair";
    case Expr::Kind::Ref: return "ref";
    case Expr::Kind::Val: return "val";
    case Expr::Kind::MakeRefVal: return "refval";
    case Expr::Kind::Singleton: return "singleton";
    case Expr::Kind::Cond: return "cond";
    case Expr::Kind::Binary: return "binary";
    case Expr::Kind::Unary: return "unary";
    case Expr::Kind::Field: return "field";
    case Expr::Kind::Comprehension: return "comprehension";
  }
  return "?";
}

void dumpExpr(std::ostream& os, const Expr& e, int depth) {
  os << std::string(depth * 2, ' ') << "(" << exprTag(e);
  switch (e.kind) {
    case Expr::Kind::IntLit: os << ' ' << e.intValue; break;
    case Expr::Kind::FloatLit: os << ' ' << floatLiteral(e.floatValue); break;
    case Expr::Kind::BoolLit: os << ' ' << (e.boolValue ? "true" : "false"); break;
    case Expr::Kind::Var:
    case Expr::Kind::Field: os << ' ' << e.name; break;
    case Expr::Kind::Binary: os << ' ' << binOpSymbol(e.binOp); break;
    case Expr::Kind::Unary: os << ' ' << (e.unOp == UnOp::Neg ? "-" : "!"); break;
    case Expr::Kind::Comprehension:
      os << ' ' << (e.reduce == ReduceFunc::None ? "list" : reduceName(e.reduce)) << ' ' << e.name;
      break;
    default: break;
  }
  if (e.kids.empty()) {
    os << ")\n";
    return;
  }
  os << '\n';
  for (const auto& k : e.kids) dumpExpr(os, *k, depth + 1);
  os << std::string(depth * 2, ' ') << ")\n";
}

void dumpBlock(std::ostream& os, const Block& b, int depth);

void dumpStmt(std::ostream& os, const Stmt& s, int depth) {
  std::string pad(depth * 2, ' ');
  switch (s.kind) {
    case Stmt::Kind::If:
      os << pad << "(if\n";
      dumpExpr(os, *s.cond, depth + 1);
      os << pad << "  (then\n";
      dumpBlock(os, s.body, depth + 2);
      os << pad << "  )\n";
      if (s.hasElse) {
        os << pad << "  (else\n";
        dumpBlock(os, s.elseBody, depth + 2);
        os << pad << "  )\n";
      }
      break;
    case Stmt::Kind::ForEach:
      os << pad << "(foreach " << s.name << "\n";
      dumpExpr(os, *s.cond, depth + 1);
      dumpBlock(os, s.body, depth + 1);
      break;
    case Stmt::Kind::Let:
      os << pad << "(let " << s.name << "\n";
      dumpExpr(os, *s.cond, depth + 1);
      break;
    case Stmt::Kind::LocalAssign:
    case Stmt::Kind::RemoteAssign:
      os << pad << (s.kind == Stmt::Kind::RemoteAssign ? "(remote-assign " : "(local-assign ") << s.name << ' '
         << assignOpSymbol(s.op) << (s.localKeyword ? " local" : "") << "\n";
      dumpExpr(os, *s.target, depth + 1);
      dumpExpr(os, *s.rhs, depth + 1);
      break;
  }
  os << pad << ")\n";
}

void dumpBlock(std::ostream& os, const Block& b, int depth) {
  for (const auto& s : b) dumpStmt(os, *s, depth);
}

void dumpProgram(std::ostream& os, const Program& p, int depth) {
  std::string pad(depth * 2, ' ');
  os << pad << "(program\n";
  for (const auto& item : p.items) {
    if (const auto* step = std::get_if<Step>(&item)) {
      os << pad << "  (step " << step->vertexVar << "\n";
      dumpBlock(os, step->body, depth + 2);
      os << pad << "  )\n";
    } else if (const auto* stop = std::get_if<StopStep>(&item)) {
      os << pad << "  (stop " << stop->vertexVar << "\n";
      dumpExpr(os, *stop->cond, depth + 2);
      os << pad << "  )\n";
    } else {
      const auto& it = std::get<Iter>(item);
      os << pad << "  (iter (fix";
      for (const auto& f : it.fixFields) os << ' ' << f;
      os << ")\n";
      dumpProgram(os, *it.body, depth + 2);
      os << pad << "  )\n";
    }
  }
  os << pad << ")\n";
}

}  // namespace

std::string prettyPrint(const Expr& e) { return print(e, kTernary); }

std::string prettyPrint(const Program& p) {
  std::ostringstream os;
  printProgram(os, p, 0);
  return os.str();
}

std::string dumpTree(const Program& p) {
  std::ostringstream os;
  dumpProgram(os, p, 0);
  return os.str();
}

}  // namespace palgol
