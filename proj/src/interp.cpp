// SPDX-License-Identifier: Apache-2.0

#include "palgol/interp.hpp"

#include "palgol/printer.hpp"

namespace palgol {

const Value& Env::lookup(const std::string& name) const {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it)
    if (it->first == name) return it->second;
  throw RuntimeError("unbound variable '" + name + "'");
}

Value reduceValues(AccOp op, const std::vector<Value>& xs) {
  if (xs.empty()) return accIdentity(op);
  Value acc = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) acc = accApply(op, acc, xs[i]);
  return acc;
}

Value coerceForField(const FieldTable& types, const std::string& field, Value v) {
  if (v.isInt()) {
    const FieldInfo* info = types.find(field);
    if (info && info->type.base == ValueType::Base::Float) return Value::real(double(v.asInt()));
  }
  return v;
}

namespace {

// Restores the variable stack on scope exit.
struct Scope {
  explicit Scope(Env& env) : env_(env), size_(env.vars.size()) {}
  ~Scope() { env_.vars.resize(size_); }
  Env& env_;
  std::size_t size_;
};

VertexId vertexOf(const Value& v, const Expr& where) {
  if (!v.isInt()) throw RuntimeError("'" + prettyPrint(where) + "' is " + v.str() + ", not a vertex id");
  return v.asInt();
}

}  // namespace

const Value& Evaluator::snapshotField(const Expr& e, const std::string& field, VertexId v) const {
  if (!g_.hasVertex(v))
    throw RuntimeError("read of nonexistent vertex " + std::to_string(v) + " in '" + prettyPrint(e) + "'");
  return g_.column(field)[std::size_t(v)];
}

Value Evaluator::readField(const Expr& e, Env& env) {
  VertexId v = vertexOf(eval(e.kid(0), env), e.kid(0));
  return snapshotField(e, e.name, v);
}

void Evaluator::iterate(const void*, const Expr& source, Env& env, const std::function<void(const Value&)>& f) {
  Value list = eval(source, env);
  if (list.kind() != Value::Kind::List) throw RuntimeError("'" + prettyPrint(source) + "' is not a list");
  for (const Value& x : list.items()) f(x);
}

Value Evaluator::comprehension(const Expr& e, Env& env) { return genericComprehension(e, env); }

Value Evaluator::genericComprehension(const Expr& e, Env& env) {
  std::vector<Value> out;
  iterate(&e, e.source(), env, [&](const Value& item) {
    Scope scope(env);
    env.vars.emplace_back(e.name, item);
    for (std::size_t i = 0; i < e.guardCount(); ++i)
      if (!eval(e.guard(i), env).asBool()) return;
    out.push_back(eval(e.body(), env));
  });
  if (e.reduce == ReduceFunc::None) return Value::list(std::move(out));
  return reduceValues(*reduceAccOp(e.reduce), out);
}

Value Evaluator::eval(const Expr& e, Env& env) {
  switch (e.kind) {
    case Expr::Kind::IntLit: return Value::integer(e.intValue);
    case Expr::Kind::FloatLit: return Value::real(e.floatValue);
    case Expr::Kind::BoolLit: return Value::boolean(e.boolValue);
    case Expr::Kind::Inf: return Value::inf();
    case Expr::Kind::Var:
      if (e.name == env.selfName) {
        for (auto it = env.vars.rbegin(); it != env.vars.rend(); ++it)
          if (it->first == e.name) return it->second;
        return Value::integer(env.self);
      }
      return env.lookup(e.name);
    case Expr::Kind::Fst: return eval(e.kid(0), env).items()[0];
    case Expr::Kind::Snd: return eval(e.kid(0), env).items()[1];
    case Expr::Kind::Ref: return eval(e.kid(0), env).items()[0];
    case Expr::Kind::Val: return eval(e.kid(0), env).items()[1];
    case Expr::Kind::MakePair: {
      Value a = eval(e.kid(0), env);
      return Value::pair(std::move(a), eval(e.kid(1), env));
    }
    case Expr::Kind::MakeRefVal: {
      Value a = eval(e.kid(0), env);
      return Value::refVal(std::move(a), eval(e.kid(1), env));
    }
    case Expr::Kind::Singleton: throw RuntimeError("singleton braces are not executable");
    case Expr::Kind::Cond: return eval(e.kid(eval(e.kid(0), env).asBool() ? 1 : 2), env);
    case Expr::Kind::Binary: {
      // && and || short-circuit so guards like `x != 0 && y / x > 1` work.
      if (e.binOp == BinOp::And || e.binOp == BinOp::Or) {
        bool l = eval(e.kid(0), env).asBool();
        if (e.binOp == BinOp::And ? !l : l) return Value::boolean(l);
        return Value::boolean(eval(e.kid(1), env).asBool());
      }
      Value l = eval(e.kid(0), env);
      Value r = eval(e.kid(1), env);
      return applyBinary(e.binOp, l, r);
    }
    case Expr::Kind::Unary: return applyUnary(e.unOp, eval(e.kid(0), env));
    case Expr::Kind::Field: return readField(e, env);
    case Expr::Kind::Comprehension: return comprehension(e, env);
  }
  return {};
}

void Evaluator::execBlock(const Block& block, Env& env, GraphState& next, std::vector<RemoteWrite>& remote) {
  Scope scope(env);
  for (const auto& sp : block) {
    const Stmt& s = *sp;
    switch (s.kind) {
      case Stmt::Kind::If:
        if (eval(*s.cond, env).asBool()) execBlock(s.body, env, next, remote);
        else execBlock(s.elseBody, env, next, remote);
        break;
      case Stmt::Kind::ForEach:
        iterate(&s, *s.cond, env, [&](const Value& item) {
          Scope inner(env);
          env.vars.emplace_back(s.name, item);
          execBlock(s.body, env, next, remote);
        });
        break;
      case Stmt::Kind::Let: env.vars.emplace_back(s.name, eval(*s.cond, env)); break;
      case Stmt::Kind::LocalAssign: {
        Value v = eval(*s.rhs, env);
        Value& slot = next.column(s.name)[std::size_t(env.self)];
        if (auto op = assignAccOp(s.op)) v = accApply(*op, slot, v);
        slot = coerceForField(types_, s.name, std::move(v));
        break;
      }
      case Stmt::Kind::RemoteAssign: {
        VertexId t = vertexOf(eval(*s.target, env), *s.target);
        if (!g_.hasVertex(t))
          throw RuntimeError("remote write to nonexistent vertex " + std::to_string(t) + " in '" +
                             prettyPrint(*s.target) + "'");
        remote.push_back({t, s.name, *assignAccOp(s.op), eval(*s.rhs, env), env.self});
        break;
      }
    }
  }
}

}  // namespace palgol
