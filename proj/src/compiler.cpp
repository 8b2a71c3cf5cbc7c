// SPDX-License-Identifier: Apache-2.0

#include "palgol/compiler.hpp"

#include <algorithm>

#include "palgol/printer.hpp"

namespace palgol {

namespace {

std::string senderListFor(const std::string& receiverList) {
  if (receiverList == "In") return "Out";
  if (receiverList == "Out") return "In";
  return receiverList;
}

Transition next(int target) { return {Transition::Kind::Next, target, -1, -1}; }

// Appends b's states to a's vector, returning the index offset.
int appendStates(STM& a, const STM& b) {
  int off = int(a.states.size());
  for (State s : b.states) {
    if (s.transition.next >= 0) s.transition.next += off;
    if (s.transition.otherwise >= 0) s.transition.otherwise += off;
    a.states.push_back(std::move(s));
  }
  return off;
}

// Removes state `victim`, redirecting every edge into it to `target`.
void removeState(STM& m, int victim, int target) {
  auto fix = [&](int& t) {
    if (t == victim) t = target;
    if (t > victim) --t;
  };
  m.states.erase(m.states.begin() + victim);
  for (State& s : m.states) {
    if (s.transition.next >= 0) fix(s.transition.next);
    if (s.transition.otherwise >= 0) fix(s.transition.otherwise);
  }
  int t = target > victim ? target - 1 : target;
  if (m.start == victim) m.start = t;
  else if (m.start > victim) --m.start;
  if (m.end == victim) m.end = t;
  else if (m.end > victim) --m.end;
}

// A comprehension is pushed to senders when its body and guards depend on
// nothing but the edge (e.ref, e.val) and the neighbor's own fields.
bool senderSide(const Expr& comp, const RemoteReads& reads) {
  bool ok = true;
  auto check = [&](const Expr& root) {
    forEachExpr(root, [&](const Expr& x) {
      if (x.kind == Expr::Kind::Comprehension) ok = false;
      if (x.kind == Expr::Kind::Var && x.name != comp.name) ok = false;
      if (x.kind == Expr::Kind::Field) {
        auto it = reads.accesses.find(&x);
        if (it == reads.accesses.end() || it->second.kind != AccessInfo::Kind::Neighbor || it->second.loop != &comp)
          ok = false;
      }
    });
  };
  check(comp.body());
  for (std::size_t i = 0; i < comp.guardCount(); ++i) check(comp.guard(i));
  return ok;
}

std::string comprehensionKey(const Expr& comp) {
  std::string key = comp.source().name + "|" + comp.name + "|" + prettyPrint(comp.body());
  for (std::size_t i = 0; i < comp.guardCount(); ++i) key += "|" + prettyPrint(comp.guard(i));
  return key;
}

}  // namespace

Compiler::Compiler(const CheckedProgram& program) : program_(program) { tables_.fields = &program.fields; }

int Compiler::addSlot(Slot s) {
  tables_.slots.push_back(std::move(s));
  return int(tables_.slots.size()) - 1;
}

void Compiler::lowerNeighborhoodAccess(CompiledStep& cs, int stepIndex) {
  std::map<const void*, std::vector<std::string>> fieldsOfLoop;
  for (const auto& [e, info] : cs.reads.accesses)
    if (info.kind == AccessInfo::Kind::Neighbor) fieldsOfLoop[info.loop].push_back(info.pattern.fields[0]);

  std::map<std::string, int> pushedByKey;
  std::map<std::string, int> componentByList;
  std::string prefix = "s" + std::to_string(stepIndex) + ".";
  for (const EdgeLoop& loop : cs.reads.edgeLoops) {
    auto f = fieldsOfLoop.find(loop.node);
    if (f == fieldsOfLoop.end()) continue;  // walks local edge data only
    if (loop.isComprehension) {
      const auto& comp = *static_cast<const Expr*>(loop.node);
      if (senderSide(comp, cs.reads)) {
        std::string key = comprehensionKey(comp);
        auto [it, fresh] = pushedByKey.emplace(key, int(cs.neighborSlots.size()));
        if (fresh) {
          NeighborSlot ns;
          ns.receiverList = loop.edgeList;
          ns.senderList = senderListFor(loop.edgeList);
          ns.pushed = true;
          ns.comprehension = &comp;
          std::string name = prefix + "push" + std::to_string(pushedByKey.size() - 1);
          std::string detail = "[" + prettyPrint(comp.body()) + "] over " + loop.edgeList;
          for (std::size_t i = 0; i < comp.guardCount(); ++i) detail += ", " + prettyPrint(comp.guard(i));
          ns.slot = addSlot({Slot::Kind::Pushed, name, stepIndex, std::nullopt, detail});
          cs.neighborSlots.push_back(std::move(ns));
        }
        cs.pushedSlotOf[loop.node] = it->second;
        continue;
      }
    }
    auto [it, fresh] = componentByList.emplace(loop.edgeList, int(cs.neighborSlots.size()));
    if (fresh) {
      NeighborSlot ns;
      ns.receiverList = loop.edgeList;
      ns.senderList = senderListFor(loop.edgeList);
      cs.neighborSlots.push_back(std::move(ns));
    }
    cs.componentSlotOf[loop.node] = it->second;
    auto& fields = cs.neighborSlots[std::size_t(it->second)].fields;
    for (const auto& name : f->second)
      if (std::find(fields.begin(), fields.end(), name) == fields.end()) fields.push_back(name);
  }
  for (auto& [list, index] : componentByList) {
    NeighborSlot& ns = cs.neighborSlots[std::size_t(index)];
    std::sort(ns.fields.begin(), ns.fields.end());
    std::string detail = "[e.val";
    for (const auto& name : ns.fields) detail += ", " + name;
    ns.slot = addSlot({Slot::Kind::Component, prefix + "nbr." + list, stepIndex, std::nullopt, detail + "] over " + list});
  }
}

STM Compiler::compileStep(const Step& step) {
  int index = int(tables_.steps.size());
  std::string prefix = "s" + std::to_string(index) + ".";
  CompiledStep cs;
  cs.step = &step;
  cs.reads = classifyRemoteReads(step, program_.fields);

  Planner planner([this](const std::string& f) {
    const FieldInfo* info = program_.fields.find(f);
    return info && info->type.base == ValueType::Base::Vertex;
  });
  cs.plan = derivePlan(cs.reads.chains, planner);
  for (const Fact& f : cs.plan.facts)
    if (!f.prop.knower.empty() && !f.prop.expr.empty())
      throw PlanningError(step.span, "plan needs relational knowledge " + f.prop.str());
  for (std::size_t r = 0; r < cs.plan.rounds.size(); ++r) {
    cs.sendSlots.emplace_back();
    for (const Send& s : cs.plan.rounds[r].sends) {
      std::string detail = "round " + std::to_string(r + 1) + ": " + s.at.str() + " -> " + s.to.str() + " [";
      for (std::size_t i = 0; i < s.payload.size(); ++i) detail += (i ? ", " : "") + s.payload[i].str();
      cs.sendSlots.back().push_back(addSlot({Slot::Kind::Chain, prefix + s.slot, index, std::nullopt, detail + "]"}));
    }
  }

  lowerNeighborhoodAccess(cs, index);

  forEachStmt(step.body, [&](const Stmt& s) {
    if (s.kind != Stmt::Kind::RemoteAssign || cs.remoteSlotOf.count(s.name)) return;
    AccOp op = *assignAccOp(s.op);
    cs.remoteOpOf[s.name] = op;
    cs.remoteSlotOf[s.name] =
        addSlot({Slot::Kind::Remote, prefix + "ru." + s.name, index, std::nullopt, s.name + " " + accOpSymbol(op)});
  });

  int rounds = int(cs.plan.size());
  bool neighbors = !cs.neighborSlots.empty();
  cs.remoteReadSupersteps = std::max(rounds, neighbors ? 1 : 0);

  STM m;
  for (int r = 1; r <= cs.remoteReadSupersteps; ++r) {
    State s;
    s.kind = StateKind::RemoteRead;
    s.consumesMessages = r > 1;
    if (r <= rounds) s.actions.push_back({Action::Kind::ChainRound, index, r});
    if (r == cs.remoteReadSupersteps && neighbors) s.actions.push_back({Action::Kind::NeighborSend, index});
    m.states.push_back(std::move(s));
  }
  State main;
  main.kind = StateKind::Main;
  main.consumesMessages = cs.remoteReadSupersteps > 0;
  main.actions.push_back({Action::Kind::Compute, index});
  m.states.push_back(std::move(main));
  if (!cs.remoteSlotOf.empty()) {
    State ru;
    ru.kind = StateKind::RemoteUpdate;
    ru.consumesMessages = true;
    ru.actions.push_back({Action::Kind::ApplyRemote, index});
    m.states.push_back(std::move(ru));
  }
  for (std::size_t i = 0; i + 1 < m.states.size(); ++i) m.states[i].transition = next(int(i) + 1);
  m.start = 0;
  m.end = int(m.states.size()) - 1;
  tables_.steps.push_back(std::move(cs));
  return m;
}

STM Compiler::compileStop(const StopStep& stop) {
  int index = int(tables_.stops.size());
  tables_.stops.push_back(&stop);
  STM m;
  State s;
  s.kind = StateKind::Stop;
  Action a{Action::Kind::StopIf};
  a.stop = index;
  s.actions.push_back(a);
  m.states.push_back(std::move(s));
  return m;
}

STM compileSeq(STM a, STM b) {
  int off = appendStates(a, b);
  int bStart = b.start + off, bEnd = b.end + off;
  State& last = a.states[std::size_t(a.end)];
  const State& first = a.states[std::size_t(bStart)];
  if (last.kind == StateKind::Stop || first.kind == StateKind::Stop) {
    last.transition = next(bStart);
    a.end = bEnd;
    return a;
  }
  // b's first state ignores incoming messages, so it can run in the same
  // superstep as a's last one.
  bool empty = last.actions.empty();
  for (const Action& act : first.actions) last.actions.push_back(act);
  if (empty) last.kind = first.kind;
  last.transition = first.transition;
  int keep = a.end;
  a.end = bEnd;
  removeState(a, bStart, keep);
  return a;
}

STM Compiler::compileIter(STM body, const std::vector<std::string>& fixFields) {
  int loop = int(tables_.loops.size());
  tables_.loops.push_back({fixFields, false, 0});
  const State& s1 = body.states[std::size_t(body.start)];
  bool mergeCheck = body.start != body.end && s1.kind == StateKind::RemoteRead &&
                    std::all_of(s1.actions.begin(), s1.actions.end(), [](const Action& a) {
                      return a.kind == Action::Kind::ChainRound && a.round == 1;
                    });

  STM m;
  State init;
  init.kind = StateKind::Init;
  Action vt{Action::Kind::VoteTrue};
  vt.loop = loop;
  init.actions.push_back(vt);
  m.states.push_back(std::move(init));
  Action guard{Action::Kind::Guard}, snap{Action::Kind::Snapshot}, vote{Action::Kind::Vote};
  guard.loop = snap.loop = vote.loop = loop;

  int check = -1;
  if (!mergeCheck) {
    State c;
    c.kind = StateKind::Check;
    c.actions.push_back(snap);
    m.states.push_back(std::move(c));
    check = 1;
  }
  int off = appendStates(m, body);
  int s1i = body.start + off, sni = body.end + off;
  State exit;
  exit.kind = StateKind::Exit;
  m.states.push_back(std::move(exit));
  int exitIndex = int(m.states.size()) - 1;

  if (mergeCheck) {
    State& head = m.states[std::size_t(s1i)];
    head.actions.insert(head.actions.begin(), {guard, snap});
    head.transition = {Transition::Kind::Cond, head.transition.next, exitIndex, loop};
    check = s1i;
  } else {
    m.states[std::size_t(check)].transition = {Transition::Kind::Cond, s1i, exitIndex, loop};
  }
  m.states[0].transition = next(check);
  m.states[std::size_t(sni)].actions.push_back(vote);
  m.states[std::size_t(sni)].transition = next(check);
  m.start = 0;
  m.end = exitIndex;
  tables_.loops[std::size_t(loop)].bodyStates = int(body.states.size()) + (mergeCheck ? 0 : 1);
  return m;
}

STM Compiler::fuseIteration(STM body, const std::vector<std::string>& fixFields) {
  const State& s1 = body.states[std::size_t(body.start)];
  if (body.start == body.end || s1.kind != StateKind::RemoteRead || s1.transition.kind != Transition::Kind::Next)
    return compileIter(std::move(body), fixFields);
  int loop = int(tables_.loops.size());
  tables_.loops.push_back({fixFields, true, int(body.states.size()) - 1});
  std::vector<Action> s1Actions = s1.actions;
  int s2Body = s1.transition.next;

  Action vt{Action::Kind::VoteTrue}, guard{Action::Kind::Guard}, snap{Action::Kind::Snapshot},
      vote{Action::Kind::Vote};
  vt.loop = guard.loop = snap.loop = vote.loop = loop;

  STM m;
  State init;
  init.kind = StateKind::Init;
  init.actions.push_back(vt);
  init.actions.insert(init.actions.end(), s1Actions.begin(), s1Actions.end());
  m.states.push_back(std::move(init));
  int off = appendStates(m, body);
  int s1i = body.start + off, s2i = s2Body + off, sni = body.end + off;
  State exit;
  exit.kind = StateKind::Exit;
  m.states.push_back(std::move(exit));
  int exitIndex = int(m.states.size()) - 1;

  State& sn = m.states[std::size_t(sni)];
  sn.actions.push_back(vote);
  sn.actions.insert(sn.actions.end(), s1Actions.begin(), s1Actions.end());
  sn.transition = next(s2i);
  State& s2 = m.states[std::size_t(s2i)];
  s2.actions.insert(s2.actions.begin(), {guard, snap});
  int after = s2.transition.kind == Transition::Kind::Next ? s2.transition.next : s2i;
  s2.transition = {Transition::Kind::Cond, after, exitIndex, loop};
  m.states[0].transition = next(s2i);
  m.start = 0;
  m.end = exitIndex;
  removeState(m, s1i, s2i);
  return m;
}

STM Compiler::compileItems(const Program& p, bool fuse) {
  std::optional<STM> acc;
  for (const auto& item : p.items) {
    STM part;
    if (const auto* step = std::get_if<Step>(&item)) {
      part = compileStep(*step);
    } else if (const auto* stop = std::get_if<StopStep>(&item)) {
      part = compileStop(*stop);
    } else {
      const auto& it = std::get<Iter>(item);
      STM body = compileItems(*it.body, fuse);
      part = fuse ? fuseIteration(std::move(body), it.fixFields) : compileIter(std::move(body), it.fixFields);
    }
    acc = acc ? compileSeq(std::move(*acc), std::move(part)) : std::move(part);
  }
  if (!acc) throw CompileError(Span{1, 1}, "empty program");
  return std::move(*acc);
}

STM Compiler::finish(STM fragment) const {
  STM m = tables_;
  m.states = std::move(fragment.states);
  m.start = fragment.start;
  m.end = fragment.end;
  return m;
}

void detectCombiners(STM& stm) {
  for (auto& cs : stm.steps) {
    for (std::size_t k = 0; k < cs.neighborSlots.size(); ++k) {
      const NeighborSlot& ns = cs.neighborSlots[k];
      if (!ns.pushed) continue;
      std::optional<AccOp> op;
      bool ok = true;
      for (const auto& [node, index] : cs.pushedSlotOf) {
        if (std::size_t(index) != k) continue;
        auto f = reduceAccOp(static_cast<const Expr*>(node)->reduce);
        if (!f || (op && *op != *f)) ok = false;
        else op = f;
      }
      if (ok && op) stm.slots[std::size_t(ns.slot)].combiner = op;
    }
    for (const auto& [field, slot] : cs.remoteSlotOf) stm.slots[std::size_t(slot)].combiner = cs.remoteOpOf.at(field);
  }
}

STM compileProgram(const CheckedProgram& program, const CompileOptions& options) {
  Compiler c(program);
  STM m = c.finish(c.compileItems(program.program, options.fuse));
  if (options.combiners) detectCombiners(m);
  return m;
}

}  // namespace palgol
