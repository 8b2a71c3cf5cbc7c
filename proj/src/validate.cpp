// SPDX-License-Identifier: Apache-2.0
//
// Structural validation, remote-read classification and the combined
// front-end entry points.

#include <functional>

#include "palgol/parser.hpp"
#include "palgol/sema.hpp"

namespace palgol {

namespace {

class Validator {
 public:
  Validator(const FieldTable& fields, std::vector<Diagnostic>& out) : fields_(fields), out_(out) {}

  void program(const Program& p) {
    if (p.items.empty()) report({}, "empty program");
    for (const auto& item : p.items) {
      if (const auto* step = std::get_if<Step>(&item)) {
        checkStep(*step);
      } else if (const auto* stop = std::get_if<StopStep>(&item)) {
        checkStop(*stop);
      } else {
        const auto& it = std::get<Iter>(item);
        program(*it.body);
        for (const auto& f : it.fixFields) fixUses_.push_back({f, it.span});
      }
    }
  }

  void finish(const Program& p) {
    std::set<std::string> assigned;
    collectAssigned(p, assigned);
    for (const auto& [f, span] : fixUses_)
      if (!assigned.count(f)) report(span, "fix field " + f + " is never assigned");
  }

 private:
  void report(Span s, std::string msg) { out_.push_back({s, std::move(msg)}); }

  static void collectAssigned(const Program& p, std::set<std::string>& out) {
    for (const auto& item : p.items) {
      if (const auto* step = std::get_if<Step>(&item)) {
        forEachStmt(step->body, [&](const Stmt& s) {
          if (s.kind == Stmt::Kind::LocalAssign || s.kind == Stmt::Kind::RemoteAssign) out.insert(s.name);
        });
      } else if (const auto* it = std::get_if<Iter>(&item)) {
        collectAssigned(*it->body, out);
      }
    }
  }

  void checkExpr(const Expr& e) {
    forEachExpr(e, [&](const Expr& x) {
      if (x.kind == Expr::Kind::Singleton) report(x.span, "singleton braces {e} are not supported");
      if (x.kind == Expr::Kind::Comprehension && x.name == vertexVar_)
        report(x.span, "cannot rebind vertex variable '" + vertexVar_ + "'");
    });
  }

  void checkStep(const Step& step) {
    vertexVar_ = step.vertexVar;
    remoteOps_.clear();
    block(step.body);
  }

  void block(const Block& b) {
    for (const auto& s : b) stmt(*s);
  }

  void stmt(const Stmt& s) {
    for (const Expr* e : {s.cond.get(), s.target.get(), s.rhs.get()})
      if (e) checkExpr(*e);
    switch (s.kind) {
      case Stmt::Kind::If:
        block(s.body);
        block(s.elseBody);
        return;
      case Stmt::Kind::ForEach:
      case Stmt::Kind::Let:
        if (s.name == vertexVar_) report(s.span, "cannot rebind vertex variable '" + vertexVar_ + "'");
        block(s.body);
        return;
      case Stmt::Kind::LocalAssign:
      case Stmt::Kind::RemoteAssign: break;
    }
    const FieldInfo* info = fields_.find(s.name);
    if (info && !info->isMutable) report(s.span, "cannot assign immutable field " + s.name);
    if (s.kind == Stmt::Kind::LocalAssign) {
      if (s.target->kind != Expr::Kind::Var || s.target->name != vertexVar_)
        report(s.target->span, "local assignment must target the current vertex '" + vertexVar_ + "'");
      return;
    }
    if (s.op == AssignOp::Set) {
      report(s.span, "remote assignment must be accumulative");
      return;
    }
    auto [it, fresh] = remoteOps_.emplace(s.name, s.op);
    if (!fresh && it->second != s.op)
      report(s.span, "field " + s.name + " is remotely updated with different operators in one step");
  }

  void checkStop(const StopStep& stop) {
    vertexVar_ = stop.vertexVar;
    checkExpr(*stop.cond);
    // Only the vertex variable and comprehension variables bound inside
    // the condition may appear.
    std::function<void(const Expr&, std::set<std::string>&)> walk = [&](const Expr& e, std::set<std::string>& bound) {
      if (e.kind == Expr::Kind::Var && e.name != stop.vertexVar && !bound.count(e.name))
        report(e.span, "stop condition may only refer to '" + stop.vertexVar + "' and fields");
      if (e.kind == Expr::Kind::Field && !(e.kid(0).kind == Expr::Kind::Var && e.kid(0).name == stop.vertexVar))
        report(e.span, "stop condition may only read fields of '" + stop.vertexVar + "'");
      if (e.kind == Expr::Kind::Comprehension) {
        walk(e.source(), bound);
        bool added = bound.insert(e.name).second;
        for (std::size_t i = 0; i < e.kids.size(); ++i)
          if (i != 1) walk(*e.kids[i], bound);
        if (added) bound.erase(e.name);
        return;
      }
      for (const auto& k : e.kids) walk(*k, bound);
    };
    std::set<std::string> bound;
    walk(*stop.cond, bound);
  }

  const FieldTable& fields_;
  std::vector<Diagnostic>& out_;
  std::string vertexVar_;
  std::map<std::string, AssignOp> remoteOps_;
  std::vector<std::pair<std::string, Span>> fixUses_;
};

// ---- remote-read classification ----

// Where an expression points: the current vertex after following
// `pattern`, or a neighbor (the .ref of an edge-loop variable).
struct Root {
  enum class Kind { Unknown, Self, Neighbor } kind = Kind::Unknown;
  AccessPattern pattern;
  int loop = -1;  // index into RemoteReads::edgeLoops
};

struct Binding {
  enum class Kind { Other, Edge, Alias } kind = Kind::Other;
  int loop = -1;  // Edge
  Root alias;                      // Alias
};

class Classifier {
 public:
  Classifier(const Step& step) : step_(step) {}

  RemoteReads run() {
    scopes_.push_back({});
    block(step_.body);
    return std::move(out_);
  }

 private:
  [[noreturn]] void unsupported(const Expr& e, const std::string& why) {
    throw CompileError(e.span, "unsupported remote read: " + why);
  }

  const Binding* lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }

  // The vertex an index expression denotes, without recording anything.
  Root rootOf(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::Var: {
        if (const Binding* b = lookup(e.name)) return b->kind == Binding::Kind::Alias ? b->alias : Root{};
        if (e.name == step_.vertexVar) return {Root::Kind::Self, {}, -1};
        return {};
      }
      case Expr::Kind::Ref: {
        const Expr& k = e.kid(0);
        if (k.kind != Expr::Kind::Var) return {};
        const Binding* b = lookup(k.name);
        if (b && b->kind == Binding::Kind::Edge) return {Root::Kind::Neighbor, {}, b->loop};
        return {};
      }
      case Expr::Kind::Field: {
        Root r = rootOf(e.kid(0));
        if (r.kind == Root::Kind::Unknown) return {};
        r.pattern = r.pattern.extended(e.name);
        return r;
      }
      default: return {};
    }
  }

  // Edge loop introduced by iterating `source`, if it is EL[u].
  int edgeLoopFor(const void* node, bool isComp, const Expr& source, const std::string& var) {
    if (source.kind != Expr::Kind::Field || !FieldTable::isEdgeList(source.name)) return -1;
    Root r = rootOf(source.kid(0));
    if (r.kind != Root::Kind::Self || !r.pattern.empty()) return -1;
    out_.edgeLoops.push_back({node, isComp, source.name, var});
    return int(out_.edgeLoops.size()) - 1;
  }

  void field(const Expr& e, bool partOfChain) {
    Root idx = rootOf(e.kid(0));
    AccessInfo info;
    switch (idx.kind) {
      case Root::Kind::Unknown:
        unsupported(e, e.name + "[...] is indexed by neither a chain from '" + step_.vertexVar +
                           "' nor a neighbor reference");
      case Root::Kind::Self:
        if (idx.pattern.empty()) break;
        info.kind = AccessInfo::Kind::Chain;
        info.pattern = idx.pattern.extended(e.name);
        if (!partOfChain) out_.chains.insert(info.pattern);
        break;
      case Root::Kind::Neighbor:
        if (!idx.pattern.empty()) unsupported(e, "chains rooted at a neighbor are limited to one field");
        if (loopDepth_ > 1) unsupported(e, "neighbor reads inside nested loops");
        info.kind = AccessInfo::Kind::Neighbor;
        info.pattern = AccessPattern{e.name};
        info.edgeList = out_.edgeLoops[idx.loop].edgeList;
        info.loop = out_.edgeLoops[idx.loop].node;
        out_.neighborhood.insert({info.edgeList, info.pattern});
        break;
    }
    out_.accesses[&e] = info;
    // The index of a chain is part of the same chain; a plain vertex
    // expression (u, e.ref) needs no further classification.
    bool inner = info.kind == AccessInfo::Kind::Chain || info.kind == AccessInfo::Kind::Local;
    expr(e.kid(0), inner && idx.kind == Root::Kind::Self && !idx.pattern.empty());
  }

  void expr(const Expr& e, bool partOfChain = false) {
    switch (e.kind) {
      case Expr::Kind::Field: field(e, partOfChain); return;
      case Expr::Kind::Comprehension: {
        expr(e.source());
        int loop = edgeLoopFor(&e, true, e.source(), e.name);
        Binding b;
        if (loop >= 0) {
          b.kind = Binding::Kind::Edge;
          b.loop = loop;
        }
        scopes_.push_back({{e.name, b}});
        ++loopDepth_;
        for (std::size_t i = 0; i < e.guardCount(); ++i) expr(e.guard(i));
        expr(e.body());
        --loopDepth_;
        scopes_.pop_back();
        return;
      }
      default:
        for (const auto& k : e.kids) expr(*k);
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
        expr(*s.cond);
        block(s.body);
        block(s.elseBody);
        return;
      case Stmt::Kind::ForEach: {
        expr(*s.cond);
        int loop = edgeLoopFor(&s, false, *s.cond, s.name);
        Binding b;
        if (loop >= 0) {
          b.kind = Binding::Kind::Edge;
          b.loop = loop;
        }
        scopes_.push_back({{s.name, b}});
        ++loopDepth_;
        block(s.body);
        --loopDepth_;
        scopes_.pop_back();
        return;
      }
      case Stmt::Kind::Let: {
        expr(*s.cond);
        Binding b;
        Root r = rootOf(*s.cond);
        if (r.kind != Root::Kind::Unknown) {
          b.kind = Binding::Kind::Alias;
          b.alias = r;
        }
        scopes_.back()[s.name] = b;
        return;
      }
      case Stmt::Kind::LocalAssign:
      case Stmt::Kind::RemoteAssign:
        // The target is an address, not a read; only its sub-reads count.
        if (s.target->kind == Expr::Kind::Field) expr(*s.target);
        else for (const auto& k : s.target->kids) expr(*k);
        expr(*s.rhs);
        return;
    }
  }

  const Step& step_;
  RemoteReads out_;
  std::vector<std::map<std::string, Binding>> scopes_;
  int loopDepth_ = 0;
};

}  // namespace

std::vector<Diagnostic> validate(const Program& program, const FieldTable& fields) {
  std::vector<Diagnostic> out;
  Validator v(fields, out);
  v.program(program);
  v.finish(program);
  return out;
}

RemoteReads classifyRemoteReads(const Step& step, const FieldTable& /*fields*/) {
  return Classifier(step).run();
}

static void classifyAll(const Program& p, const FieldTable& fields) {
  for (const auto& item : p.items) {
    if (const auto* step = std::get_if<Step>(&item)) classifyRemoteReads(*step, fields);
    else if (const auto* it = std::get_if<Iter>(&item)) classifyAll(*it->body, fields);
  }
}

CheckedProgram checkProgram(Program program) {
  if (program.items.empty()) throw CompileError(Span{1, 1}, "empty program");
  FieldTable fields = inferTypes(program);
  auto diags = validate(program, fields);
  if (!diags.empty()) throw CompileError(std::move(diags));
  classifyAll(program, fields);
  return {std::move(program), std::move(fields)};
}

CheckedProgram checkSource(std::string_view source) { return checkProgram(parseSource(source)); }

}  // namespace palgol
