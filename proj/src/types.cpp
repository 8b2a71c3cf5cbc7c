// SPDX-License-Identifier: Apache-2.0
//
// Unification-based type inference. Type variables carry a mask of the
// base types they may still become; integer literals and `inf` start as
// {int, float, vertex} and are defaulted to int when left unconstrained.

#include <functional>

#include "palgol/sema.hpp"

namespace palgol {

std::string ValueType::str() const {
  switch (base) {
    case Base::Int: return "int";
    case Base::Float: return "float";
    case Base::Bool: return "bool";
    case Base::Vertex: return "vertex";
    case Base::Pair: return "pair(" + args[0].str() + ", " + args[1].str() + ")";
    case Base::RefVal: return "refval(" + args[0].str() + ", " + args[1].str() + ")";
    case Base::List: return "list(" + args[0].str() + ")";
  }
  return "?";
}

Value defaultValue(const ValueType& t, VertexId self) {
  switch (t.base) {
    case ValueType::Base::Int: return Value::integer(0);
    case ValueType::Base::Float: return Value::real(0.0);
    case ValueType::Base::Bool: return Value::boolean(false);
    case ValueType::Base::Vertex: return Value::integer(self);
    case ValueType::Base::Pair: return Value::pair(defaultValue(t.args[0], self), defaultValue(t.args[1], self));
    case ValueType::Base::RefVal: return Value::refVal(defaultValue(t.args[0], self), defaultValue(t.args[1], self));
    case ValueType::Base::List: return Value::list({});
  }
  return {};
}

static ValueType edgeListType() {
  using B = ValueType::Base;
  return ValueType::of(B::List, {ValueType::of(B::RefVal, {ValueType::of(B::Vertex), ValueType::of(B::Int)})});
}

FieldTable::FieldTable() {
  fields_["Id"] = {ValueType::of(ValueType::Base::Vertex), false, true};
  for (const char* name : {"Nbr", "In", "Out"}) fields_[name] = {edgeListType(), false, true};
}

const FieldInfo* FieldTable::find(const std::string& name) const {
  auto it = fields_.find(name);
  return it == fields_.end() ? nullptr : &it->second;
}

const FieldInfo& FieldTable::at(const std::string& name) const {
  if (const FieldInfo* f = find(name)) return *f;
  throw CompileError(Span{}, "unknown field '" + name + "'");
}

namespace {

using Base = ValueType::Base;

enum : std::uint8_t {
  kInt = 1,
  kFloat = 2,
  kVertex = 4,
  kBool = 8,
  kCompound = 16,
  kAny = 31,
  kArith = kInt | kFloat,
  kOrdered = kInt | kFloat | kVertex,
  kNumLit = kInt | kFloat | kVertex,
};

std::uint8_t bitOf(Base b) {
  switch (b) {
    case Base::Int: return kInt;
    case Base::Float: return kFloat;
    case Base::Vertex: return kVertex;
    case Base::Bool: return kBool;
    default: return kCompound;
  }
}

struct Term {
  bool isVar = true;
  int parent = -1;
  std::uint8_t mask = kAny;
  Base base = Base::Int;
  std::vector<int> args;
};

class Inferencer {
 public:
  TypeInfo run(const Program& p) {
    for (const auto& [name, info] : result_.fields.all()) fieldTerms_[name] = fromType(info.type);
    program(p);
    for (const auto& [name, term] : fieldTerms_) {
      if (result_.fields.contains(name)) continue;
      result_.fields.set(name, {resolve(term), true, false});
    }
    for (const auto& [e, term] : exprTerms_) result_.exprTypes[e] = resolve(term);
    return std::move(result_);
  }

 private:
  int fresh(std::uint8_t mask = kAny) {
    Term t;
    t.mask = mask;
    terms_.push_back(t);
    return int(terms_.size()) - 1;
  }
  int con(Base b, std::vector<int> args = {}) {
    Term t;
    t.isVar = false;
    t.base = b;
    t.args = std::move(args);
    terms_.push_back(t);
    return int(terms_.size()) - 1;
  }
  int fromType(const ValueType& t) {
    std::vector<int> args;
    for (const auto& a : t.args) args.push_back(fromType(a));
    return con(t.base, std::move(args));
  }
  int find(int t) {
    while (terms_[t].parent >= 0) {
      int p = terms_[t].parent;
      if (terms_[p].parent >= 0) terms_[t].parent = terms_[p].parent;
      t = p;
    }
    return t;
  }

  bool occurs(int var, int t) {
    t = find(t);
    if (t == var) return true;
    for (int a : terms_[t].args)
      if (occurs(var, a)) return true;
    return false;
  }

  std::string show(int t) {
    t = find(t);
    const Term& x = terms_[t];
    if (x.isVar) {
      if (x.mask == kNumLit || x.mask == kOrdered) return "numeric";
      if (x.mask == kArith) return "number";
      if (x.mask == kInt) return "int";
      if (x.mask == kFloat) return "float";
      if (x.mask == kVertex) return "vertex";
      if (x.mask == kBool) return "bool";
      return "?";
    }
    switch (x.base) {
      case Base::Pair: return "pair(" + show(x.args[0]) + ", " + show(x.args[1]) + ")";
      case Base::RefVal: return "refval(" + show(x.args[0]) + ", " + show(x.args[1]) + ")";
      case Base::List: return "list(" + show(x.args[0]) + ")";
      default: return ValueType::of(x.base).str();
    }
  }

  bool tryUnify(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return true;
    Term& x = terms_[a];
    Term& y = terms_[b];
    if (x.isVar && y.isVar) {
      std::uint8_t m = x.mask & y.mask;
      if (!m) return false;
      x.parent = b;
      y.mask = m;
      return true;
    }
    if (x.isVar || y.isVar) {
      int var = x.isVar ? a : b, other = x.isVar ? b : a;
      if (!(terms_[var].mask & bitOf(terms_[other].base)) || occurs(var, other)) return false;
      terms_[var].parent = other;
      return true;
    }
    if (x.base != y.base || x.args.size() != y.args.size()) return false;
    std::vector<int> xa = x.args, ya = y.args;
    for (std::size_t i = 0; i < xa.size(); ++i)
      if (!tryUnify(xa[i], ya[i])) return false;
    return true;
  }

  void unify(int a, int b, Span span, const std::string& what) {
    std::string sa = show(a), sb = show(b);
    if (!tryUnify(a, b)) throw CompileError(span, "type error: " + what + ": " + sa + " vs " + sb);
  }

  void restrict(int t, std::uint8_t mask, Span span, const std::string& what) {
    std::string st = show(t);
    if (!tryUnify(t, fresh(mask))) throw CompileError(span, "type error: " + what + " cannot be " + st);
  }

  int fieldTerm(const std::string& name, Span span) {
    auto it = fieldTerms_.find(name);
    if (it == fieldTerms_.end()) it = fieldTerms_.emplace(name, fresh()).first;
    firstUse_.emplace(name, span);
    return it->second;
  }

  void unifyField(const std::string& name, int t, Span span) {
    int ft = fieldTerm(name, span);
    std::string fs = show(ft), ts = show(t);
    if (tryUnify(ft, t)) return;
    Span first = firstUse_[name];
    throw CompileError(std::vector<Diagnostic>{
        {span, "type error: field " + name + " used as " + ts + " here"},
        {first, "field " + name + " previously used as " + fs + " here"}});
  }

  void restrictField(const std::string& name, std::uint8_t mask, Span span, const std::string& what) {
    int ft = fieldTerm(name, span);
    std::string fs = show(ft);
    if (tryUnify(ft, fresh(mask))) return;
    throw CompileError(std::vector<Diagnostic>{
        {span, "type error: " + what + " on field " + name},
        {firstUse_[name], "field " + name + " previously used as " + fs + " here"}});
  }

  ValueType resolve(int t) {
    t = find(t);
    const Term& x = terms_[t];
    if (x.isVar) {
      if (x.mask & kInt) return ValueType::of(Base::Int);
      if (x.mask & kFloat) return ValueType::of(Base::Float);
      if (x.mask & kVertex) return ValueType::of(Base::Vertex);
      if (x.mask & kBool) return ValueType::of(Base::Bool);
      return ValueType::of(Base::Int);
    }
    std::vector<ValueType> args;
    for (int a : x.args) args.push_back(resolve(a));
    return ValueType::of(x.base, std::move(args));
  }

  // ---- scopes ----
  int lookup(const std::string& name, Span span) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return f->second;
    }
    throw CompileError(span, "unknown variable '" + name + "'");
  }

  void program(const Program& p) {
    for (const auto& item : p.items) {
      if (const auto* step = std::get_if<Step>(&item)) {
        scopes_.push_back({{step->vertexVar, con(Base::Vertex)}});
        block(step->body);
        scopes_.pop_back();
      } else if (const auto* stop = std::get_if<StopStep>(&item)) {
        scopes_.push_back({{stop->vertexVar, con(Base::Vertex)}});
        unify(expr(*stop->cond), con(Base::Bool), stop->cond->span, "stop condition");
        scopes_.pop_back();
      } else {
        const auto& it = std::get<Iter>(item);
        program(*it.body);
        for (const auto& f : it.fixFields) fieldTerm(f, it.span);
      }
    }
  }

  void block(const Block& b) {
    scopes_.emplace_back();
    for (const auto& s : b) stmt(*s);
    scopes_.pop_back();
  }

  void stmt(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::If:
        unify(expr(*s.cond), con(Base::Bool), s.cond->span, "if condition");
        block(s.body);
        block(s.elseBody);
        break;
      case Stmt::Kind::ForEach: {
        int elem = fresh();
        unify(expr(*s.cond), con(Base::List, {elem}), s.cond->span, "loop source must be a list");
        scopes_.push_back({{s.name, elem}});
        block(s.body);
        scopes_.pop_back();
        break;
      }
      case Stmt::Kind::Let: scopes_.back()[s.name] = expr(*s.cond); break;
      case Stmt::Kind::LocalAssign:
      case Stmt::Kind::RemoteAssign: {
        unify(expr(*s.target), con(Base::Vertex), s.target->span, "assignment target must be a vertex id");
        unifyField(s.name, expr(*s.rhs), s.rhs->span);
        if (auto acc = assignAccOp(s.op)) {
          std::string what = std::string("operator ") + accOpSymbol(*acc);
          switch (*acc) {
            case AccOp::Sum:
            case AccOp::Product: restrictField(s.name, kArith, s.span, what); break;
            case AccOp::Min:
            case AccOp::Max: restrictField(s.name, kOrdered, s.span, what); break;
            case AccOp::Or:
            case AccOp::And: restrictField(s.name, kBool, s.span, what); break;
          }
        }
        break;
      }
    }
  }

  int expr(const Expr& e) {
    int t = exprInner(e);
    exprTerms_[&e] = t;
    return t;
  }

  int exprInner(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::IntLit:
      case Expr::Kind::Inf: return fresh(kNumLit);
      case Expr::Kind::FloatLit: return con(Base::Float);
      case Expr::Kind::BoolLit: return con(Base::Bool);
      case Expr::Kind::Var: return lookup(e.name, e.span);
      case Expr::Kind::Fst:
      case Expr::Kind::Snd: {
        int a = fresh(), b = fresh();
        unify(expr(e.kid(0)), con(Base::Pair, {a, b}), e.span, "fst/snd needs a pair");
        return e.kind == Expr::Kind::Fst ? a : b;
      }
      case Expr::Kind::MakePair: {
        int a = expr(e.kid(0));
        return con(Base::Pair, {a, expr(e.kid(1))});
      }
      case Expr::Kind::Ref:
      case Expr::Kind::Val: {
        int r = con(Base::Vertex), v = fresh();
        unify(expr(e.kid(0)), con(Base::RefVal, {r, v}), e.span, ".ref/.val needs a reference-value pair");
        return e.kind == Expr::Kind::Ref ? r : v;
      }
      case Expr::Kind::MakeRefVal: {
        int r = expr(e.kid(0));
        unify(r, con(Base::Vertex), e.kid(0).span, "reference must be a vertex id");
        return con(Base::RefVal, {r, expr(e.kid(1))});
      }
      case Expr::Kind::Singleton: expr(e.kid(0)); return fresh();
      case Expr::Kind::Cond: {
        unify(expr(e.kid(0)), con(Base::Bool), e.kid(0).span, "condition");
        int a = expr(e.kid(1));
        unify(a, expr(e.kid(2)), e.span, "branches of ?:");
        return a;
      }
      case Expr::Kind::Binary: {
        int l = expr(e.kid(0)), r = expr(e.kid(1));
        std::string op = binOpSymbol(e.binOp);
        switch (e.binOp) {
          case BinOp::And:
          case BinOp::Or:
            unify(l, con(Base::Bool), e.kid(0).span, "operand of " + op);
            unify(r, con(Base::Bool), e.kid(1).span, "operand of " + op);
            return con(Base::Bool);
          case BinOp::Eq:
          case BinOp::Ne:
            unify(l, r, e.span, "operands of " + op);
            return con(Base::Bool);
          case BinOp::Lt:
          case BinOp::Le:
          case BinOp::Gt:
          case BinOp::Ge:
            unify(l, r, e.span, "operands of " + op);
            restrict(l, kOrdered | kBool, e.span, "operand of " + op);
            return con(Base::Bool);
          default:
            unify(l, r, e.span, "operands of " + op);
            restrict(l, kArith, e.span, "operand of " + op);
            return l;
        }
      }
      case Expr::Kind::Unary: {
        int t = expr(e.kid(0));
        if (e.unOp == UnOp::Not) {
          unify(t, con(Base::Bool), e.span, "operand of !");
          return t;
        }
        restrict(t, kArith, e.span, "operand of unary -");
        return t;
      }
      case Expr::Kind::Field: {
        unify(expr(e.kid(0)), con(Base::Vertex), e.kid(0).span, "index of " + e.name + " must be a vertex id");
        return fieldTerm(e.name, e.span);
      }
      case Expr::Kind::Comprehension: {
        int elem = fresh();
        unify(expr(e.source()), con(Base::List, {elem}), e.source().span, "generator source must be a list");
        scopes_.push_back({{e.name, elem}});
        for (std::size_t i = 0; i < e.guardCount(); ++i)
          unify(expr(e.guard(i)), con(Base::Bool), e.guard(i).span, "guard");
        int b = expr(e.body());
        scopes_.pop_back();
        switch (e.reduce) {
          case ReduceFunc::None: return con(Base::List, {b});
          case ReduceFunc::Minimum:
          case ReduceFunc::Maximum: restrict(b, kOrdered, e.span, std::string(reduceName(e.reduce)) + " element"); break;
          case ReduceFunc::Sum:
          case ReduceFunc::Product: restrict(b, kArith, e.span, std::string(reduceName(e.reduce)) + " element"); break;
          case ReduceFunc::Or:
          case ReduceFunc::And: unify(b, con(Base::Bool), e.span, std::string(reduceName(e.reduce)) + " element"); break;
        }
        return b;
      }
    }
    return fresh();
  }

  TypeInfo result_;
  std::vector<Term> terms_;
  std::map<std::string, int> fieldTerms_;
  std::map<std::string, Span> firstUse_;
  std::unordered_map<const Expr*, int> exprTerms_;
  std::vector<std::map<std::string, int>> scopes_;
};

}  // namespace

TypeInfo inferAll(const Program& program) { return Inferencer().run(program); }

FieldTable inferTypes(const Program& program) { return inferAll(program).fields; }

}  // namespace palgol
