// SPDX-License-Identifier: Apache-2.0

#include "palgol/parser.hpp"

#include <charconv>

namespace palgol {

namespace {

std::string describe(const Token& t) {
  switch (t.kind) {
    case Token::Kind::BlockOpen:
    case Token::Kind::BlockClose:
    case Token::Kind::Newline:
    case Token::Kind::Eof: return tokenKindName(t.kind);
    default: return std::string(tokenKindName(t.kind)) + " '" + t.lexeme + "'";
  }
}

class Parser {
 public:
  explicit Parser(const std::vector<Token>& toks) : toks_(toks) {}

  Program parseTop() {
    skipNewlines();
    if (at().kind == Token::Kind::Eof) throw CompileError(at().span, "empty program");
    Program p = parseProgram();
    skipNewlines();
    if (at().kind != Token::Kind::Eof) fail("end of input");
    return p;
  }

 private:
  const Token& at(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  const Token& advance() {
    const Token& t = at();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const std::string& expected) const {
    throw CompileError(at().span, "syntax error: expected " + expected + ", found " + describe(at()));
  }
  bool acceptOp(std::string_view op) {
    if (!at().isOp(op)) return false;
    advance();
    return true;
  }
  void expectOp(std::string_view op) {
    if (!acceptOp(op)) fail("'" + std::string(op) + "'");
  }
  void expectKeyword(std::string_view kw) {
    if (!at().isKeyword(kw)) fail("'" + std::string(kw) + "'");
    advance();
  }
  void expectKind(Token::Kind k) {
    if (at().kind != k) fail(tokenKindName(k));
    advance();
  }
  std::string expectIdent() {
    if (at().kind != Token::Kind::Ident) fail("a variable name");
    return advance().lexeme;
  }
  std::string expectField() {
    if (at().kind != Token::Kind::FieldIdent) fail("a field name");
    return advance().lexeme;
  }
  void skipNewlines() {
    while (at().kind == Token::Kind::Newline) advance();
  }

  // prog ::= item (Newline item)*
  Program parseProgram() {
    Program p;
    for (;;) {
      skipNewlines();
      if (at().kind == Token::Kind::Eof || at().kind == Token::Kind::BlockClose) break;
      p.items.push_back(parseItem());
    }
    return p;
  }

  ProgramItem parseItem() {
    if (at().isKeyword("for")) return parseStep();
    if (at().isKeyword("do")) return parseIter();
    if (at().isKeyword("stop")) return parseStop();
    fail("'for', 'do' or 'stop'");
  }

  Step parseStep() {
    Step s;
    s.span = advance().span;
    s.vertexVar = expectIdent();
    expectKeyword("in");
    expectKeyword("V");
    s.body = parseIndentedBlock();
    expectKind(Token::Kind::Newline);
    expectKeyword("end");
    return s;
  }

  StopStep parseStop() {
    StopStep s;
    s.span = advance().span;
    s.vertexVar = expectIdent();
    expectKeyword("where");
    s.cond = parseExpr();
    return s;
  }

  Iter parseIter() {
    Iter it;
    it.span = advance().span;
    expectKind(Token::Kind::BlockOpen);
    it.body = std::make_unique<const Program>(parseProgram());
    if (it.body->items.empty()) throw CompileError(it.span, "empty loop body");
    expectKind(Token::Kind::BlockClose);
    expectKind(Token::Kind::Newline);
    expectKeyword("until");
    expectKeyword("fix");
    expectOp("[");
    if (at().isOp("]")) throw CompileError(at().span, "syntax error: fix list must name at least one field");
    it.fixFields.push_back(expectField());
    while (acceptOp(",")) it.fixFields.push_back(expectField());
    expectOp("]");
    return it;
  }

  Block parseIndentedBlock() {
    expectKind(Token::Kind::BlockOpen);
    Block b;
    b.push_back(parseStmt());
    while (at().kind == Token::Kind::Newline) {
      advance();
      if (at().kind == Token::Kind::BlockClose) break;
      b.push_back(parseStmt());
    }
    expectKind(Token::Kind::BlockClose);
    return b;
  }

  StmtPtr parseStmt() {
    Stmt s;
    s.span = at().span;
    if (at().isKeyword("if")) {
      advance();
      s.kind = Stmt::Kind::If;
      s.cond = parseExpr();
      s.body = parseIndentedBlock();
      if (at().kind == Token::Kind::Newline && at(1).isKeyword("else")) {
        advance();
        advance();
        s.hasElse = true;
        s.elseBody = parseIndentedBlock();
      }
      return makeStmt(std::move(s));
    }
    if (at().isKeyword("for")) {
      advance();
      s.kind = Stmt::Kind::ForEach;
      bool paren = acceptOp("(");
      s.name = expectIdent();
      expectOp("<-");
      s.cond = parseExpr();
      if (paren) expectOp(")");
      s.body = parseIndentedBlock();
      return makeStmt(std::move(s));
    }
    if (at().isKeyword("let")) {
      advance();
      s.kind = Stmt::Kind::Let;
      s.name = expectIdent();
      expectOp("=");
      s.cond = parseExpr();
      return makeStmt(std::move(s));
    }
    bool remote = false;
    if (at().isKeyword("remote")) {
      advance();
      remote = true;
    } else if (at().isKeyword("local")) {
      advance();
      s.localKeyword = true;
    }
    if (at().kind != Token::Kind::FieldIdent) fail(remote || s.localKeyword ? "a field name" : "a statement");
    s.kind = remote ? Stmt::Kind::RemoteAssign : Stmt::Kind::LocalAssign;
    s.name = advance().lexeme;
    expectOp("[");
    s.target = parseExpr();
    expectOp("]");
    s.op = parseAssignOp();
    s.rhs = parseExpr();
    return makeStmt(std::move(s));
  }

  AssignOp parseAssignOp() {
    static const std::pair<const char*, AssignOp> ops[] = {
        {":=", AssignOp::Set}, {"+=", AssignOp::Sum}, {"<?=", AssignOp::Min}, {">?=", AssignOp::Max},
        {"|=", AssignOp::Or},  {"&&=", AssignOp::And}, {"*=", AssignOp::Product}};
    for (auto [text, op] : ops)
      if (acceptOp(text)) return op;
    fail("an assignment operator");
  }

  // ---- expressions ----

  static ExprPtr node(Expr::Kind k, Span span, std::vector<ExprPtr> kids = {}) {
    Expr e{k, span};
    e.kids = std::move(kids);
    return makeExpr(std::move(e));
  }
  static std::vector<ExprPtr> list(ExprPtr a, ExprPtr b = nullptr, ExprPtr c = nullptr) {
    std::vector<ExprPtr> v;
    for (ExprPtr* p : {&a, &b, &c})
      if (*p) v.push_back(std::move(*p));
    return v;
  }
  static ExprPtr binary(BinOp op, ExprPtr l, ExprPtr r) {
    Expr e{Expr::Kind::Binary, l->span};
    e.binOp = op;
    e.kids = list(std::move(l), std::move(r));
    return makeExpr(std::move(e));
  }

  ExprPtr parseExpr() {
    ExprPtr c = parseOr();
    if (!at().isOp("?")) return c;
    advance();
    ExprPtr a = parseExpr();
    expectOp(":");
    ExprPtr b = parseExpr();
    Span sp = c->span;
    return node(Expr::Kind::Cond, sp, list(std::move(c), std::move(a), std::move(b)));
  }

  ExprPtr parseOr() {
    ExprPtr l = parseAnd();
    while (acceptOp("||")) l = binary(BinOp::Or, std::move(l), parseAnd());
    return l;
  }

  ExprPtr parseAnd() {
    ExprPtr l = parseCmp();
    while (acceptOp("&&")) l = binary(BinOp::And, std::move(l), parseCmp());
    return l;
  }

  ExprPtr parseCmp() {
    ExprPtr l = parseAdd();
    static const std::pair<const char*, BinOp> ops[] = {{"==", BinOp::Eq}, {"!=", BinOp::Ne}, {"<=", BinOp::Le},
                                                        {">=", BinOp::Ge}, {"<", BinOp::Lt},  {">", BinOp::Gt}};
    for (auto [text, op] : ops)
      if (acceptOp(text)) return binary(op, std::move(l), parseAdd());
    return l;
  }

  ExprPtr parseAdd() {
    ExprPtr l = parseMul();
    for (;;) {
      if (acceptOp("+")) l = binary(BinOp::Add, std::move(l), parseMul());
      else if (acceptOp("-")) l = binary(BinOp::Sub, std::move(l), parseMul());
      else return l;
    }
  }

  ExprPtr parseMul() {
    ExprPtr l = parseUnary();
    for (;;) {
      if (acceptOp("*")) l = binary(BinOp::Mul, std::move(l), parseUnary());
      else if (acceptOp("/")) l = binary(BinOp::Div, std::move(l), parseUnary());
      else if (acceptOp("%")) l = binary(BinOp::Mod, std::move(l), parseUnary());
      else return l;
    }
  }

  ExprPtr parseUnary() {
    Span sp = at().span;
    if (acceptOp("-") || at().isOp("!")) {
      bool neg = !acceptOp("!");
      Expr e{Expr::Kind::Unary, sp};
      e.unOp = neg ? UnOp::Neg : UnOp::Not;
      e.kids = list(parseUnary());
      return makeExpr(std::move(e));
    }
    if (at().isKeyword("fst") || at().isKeyword("snd")) {
      Expr::Kind k = advance().lexeme == "fst" ? Expr::Kind::Fst : Expr::Kind::Snd;
      return node(k, sp, list(parseUnary()));
    }
    return parsePostfix();
  }

  ExprPtr parsePostfix() {
    ExprPtr e = parsePrimary();
    while (at().isOp(".")) {
      Span sp = advance().span;
      if (at().kind != Token::Kind::Ident) fail("'ref' or 'val'");
      const std::string& proj = at().lexeme;
      // `.id` is accepted as a synonym of `.ref`.
      if (proj == "ref" || proj == "id") e = node(Expr::Kind::Ref, sp, list(std::move(e)));
      else if (proj == "val") e = node(Expr::Kind::Val, sp, list(std::move(e)));
      else fail("'ref' or 'val'");
      advance();
    }
    return e;
  }

  ExprPtr parseComprehension(ReduceFunc f, Span sp) {
    expectOp("[");
    ExprPtr body = parseExpr();
    expectOp("|");
    Expr e{Expr::Kind::Comprehension, sp};
    e.reduce = f;
    e.name = expectIdent();
    expectOp("<-");
    e.kids.push_back(std::move(body));
    e.kids.push_back(parseExpr());
    while (acceptOp(",")) e.kids.push_back(parseExpr());
    expectOp("]");
    return makeExpr(std::move(e));
  }

  ExprPtr parsePrimary() {
    const Token& t = at();
    Span sp = t.span;
    switch (t.kind) {
      case Token::Kind::Int: {
        Expr e{Expr::Kind::IntLit, sp};
        auto [p, ec] = std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), e.intValue);
        if (ec != std::errc()) throw CompileError(sp, "integer literal out of range");
        advance();
        return makeExpr(std::move(e));
      }
      case Token::Kind::Float: {
        Expr e{Expr::Kind::FloatLit, sp};
        e.floatValue = std::stod(t.lexeme);
        advance();
        return makeExpr(std::move(e));
      }
      case Token::Kind::Ident: {
        Expr e{Expr::Kind::Var, sp};
        e.name = advance().lexeme;
        return makeExpr(std::move(e));
      }
      case Token::Kind::FieldIdent: {
        Expr e{Expr::Kind::Field, sp};
        e.name = advance().lexeme;
        expectOp("[");
        e.kids = list(parseExpr());
        expectOp("]");
        return makeExpr(std::move(e));
      }
      case Token::Kind::Keyword: {
        if (t.lexeme == "true" || t.lexeme == "false") {
          Expr e{Expr::Kind::BoolLit, sp};
          e.boolValue = advance().lexeme == "true";
          return makeExpr(std::move(e));
        }
        if (t.lexeme == "inf") {
          advance();
          return node(Expr::Kind::Inf, sp);
        }
        static const std::pair<const char*, ReduceFunc> funcs[] = {
            {"minimum", ReduceFunc::Minimum}, {"maximum", ReduceFunc::Maximum}, {"sum", ReduceFunc::Sum},
            {"product", ReduceFunc::Product}, {"or", ReduceFunc::Or},           {"and", ReduceFunc::And}};
        for (auto [name, f] : funcs) {
          if (t.lexeme == name) {
            advance();
            return parseComprehension(f, sp);
          }
        }
        break;
      }
      case Token::Kind::Op: {
        if (t.lexeme == "[") return parseComprehension(ReduceFunc::None, sp);
        if (t.lexeme == "(") {
          advance();
          ExprPtr a = parseExpr();
          if (acceptOp(",")) {
            ExprPtr b = parseExpr();
            expectOp(")");
            return node(Expr::Kind::MakePair, sp, list(std::move(a), std::move(b)));
          }
          expectOp(")");
          return a;
        }
        if (t.lexeme == "{") {
          advance();
          ExprPtr a = parseExpr();
          if (acceptOp(",")) {
            ExprPtr b = parseExpr();
            expectOp("}");
            return node(Expr::Kind::MakeRefVal, sp, list(std::move(a), std::move(b)));
          }
          expectOp("}");
          return node(Expr::Kind::Singleton, sp, list(std::move(a)));
        }
        break;
      }
      default: break;
    }
    fail("an expression");
  }

  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Program parse(const std::vector<Token>& tokens) {
  if (tokens.empty() || tokens.back().kind != Token::Kind::Eof) {
    std::vector<Token> withEof = tokens;
    withEof.push_back({Token::Kind::Eof, "", tokens.empty() ? Span{1, 1} : tokens.back().span});
    return Parser(withEof).parseTop();
  }
  return Parser(tokens).parseTop();
}

Program parseSource(std::string_view source) { return parse(tokenize(source)); }

}  // namespace palgol
