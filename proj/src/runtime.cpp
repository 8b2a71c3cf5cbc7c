// SPDX-License-Identifier: Apache-2.0

#include "palgol/runtime.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "palgol/interp.hpp"
#include "palgol/printer.hpp"

namespace palgol {

std::string RunStats::str() const {
  std::ostringstream os;
  os << "supersteps=" << supersteps << "\n"
     << "messages_sent=" << messagesSent << "\n"
     << "messages_combined=" << messagesCombined << "\n"
     << "remote_writes_discarded=" << remoteWritesDiscarded << "\n"
     << "loop_iterations=";
  for (std::size_t i = 0; i < loopIterations.size(); ++i) os << (i ? "," : "") << loopIterations[i];
  os << "\n";
  return os.str();
}

namespace {

struct ChainRef {
  int step = -1;
  int round = 0;  // 1-based
  int send = -1;
};

// What a vertex has learned from chain rounds of the current step.
struct Knowledge {
  std::map<AccessPattern, Value> values;                  // ([] knows X)
  std::map<AccessPattern, std::vector<VertexId>> origins;  // (P knows [])
};

class Machine;

// Step-body evaluation at a receiving vertex: chain reads come from
// knowledge, neighbor reads and pushed comprehensions from the inbox.
class CompiledEvaluator : public Evaluator {
 public:
  CompiledEvaluator(const GraphState& g, const FieldTable& types, const Machine& m, const CompiledStep& cs, int step)
      : Evaluator(g, types), m_(m), cs_(cs), step_(step) {}

  void setVertex(VertexId v, const std::vector<Message>& inbox) {
    self_ = v;
    inbox_ = &inbox;
  }

 protected:
  Value readField(const Expr& e, Env& env) override;
  Value comprehension(const Expr& e, Env& env) override;
  void iterate(const void* node, const Expr& source, Env& env, const std::function<void(const Value&)>& f) override;

 private:
  const Machine& m_;
  const CompiledStep& cs_;
  int step_;
  VertexId self_ = 0;
  const std::vector<Message>* inbox_ = nullptr;
  std::map<const void*, const std::vector<Value>*> payload_;
};

class Machine {
 public:
  Machine(const STM& stm, GraphState g, const RunOptions& options)
      : stm_(stm), g_(std::move(g)), options_(options), inbox_(g_.size()) {
    chainOf_.resize(stm.slots.size());
    remoteField_.resize(stm.slots.size());
    for (std::size_t s = 0; s < stm.steps.size(); ++s) {
      const CompiledStep& cs = stm.steps[s];
      for (std::size_t r = 0; r < cs.sendSlots.size(); ++r)
        for (std::size_t k = 0; k < cs.sendSlots[r].size(); ++k)
          chainOf_[std::size_t(cs.sendSlots[r][k])] = {int(s), int(r) + 1, int(k)};
      for (const auto& [field, slot] : cs.remoteSlotOf) remoteField_[std::size_t(slot)] = field;
    }
    knowledge_.assign(stm.steps.size(), {});
    visible_.assign(stm.loops.size(), false);
    pending_.assign(stm.loops.size(), false);
    iterations_.assign(stm.loops.size(), 0);
    snapshots_.resize(stm.loops.size());
  }

  GraphState run(RunStats& stats);

  Value known(int step, VertexId x, const AccessPattern& p) const {
    if (p.empty()) return Value::integer(x);
    if (p.size() == 1) return g_.column(p.fields[0])[std::size_t(x)];
    const auto& k = knowledge_[std::size_t(step)];
    if (!k.empty()) {
      auto it = k[std::size_t(x)].values.find(p);
      if (it != k[std::size_t(x)].values.end()) return it->second;
    }
    throw RuntimeError("vertex " + std::to_string(x) + " never learned " + p.str());
  }

 private:
  void emit(Message msg) {
    if (!g_.hasVertex(msg.dest))
      throw RuntimeError("message to nonexistent vertex " + std::to_string(msg.dest) + " from vertex " +
                         std::to_string(msg.source));
    ++stats_->messagesSent;
    outbox_.push_back(std::move(msg));
  }

  void deliver(bool consume);
  void runActions(const State& s);

  void chainRound(int step, int round);
  void absorb(int step, int round, VertexId x);
  void neighborSend(int step);
  void compute(int step);
  void applyRemote(int step);
  void stopIf(int stop);
  void vote(int loop);

  const STM& stm_;
  GraphState g_;
  const RunOptions& options_;
  RunStats* stats_ = nullptr;
  std::vector<std::vector<Message>> inbox_;
  std::vector<Message> outbox_;
  std::vector<ChainRef> chainOf_;
  std::vector<std::string> remoteField_;
  std::vector<std::vector<Knowledge>> knowledge_;  // [step][vertex]
  std::vector<bool> visible_, pending_;
  std::vector<std::size_t> iterations_;
  std::vector<std::map<std::string, std::vector<Value>>> snapshots_;
  std::mt19937_64 rng_;
};

Value CompiledEvaluator::readField(const Expr& e, Env& env) {
  auto it = cs_.reads.accesses.find(&e);
  if (it == cs_.reads.accesses.end() || it->second.kind == AccessInfo::Kind::Local) return Evaluator::readField(e, env);
  const AccessInfo& info = it->second;
  if (info.kind == AccessInfo::Kind::Chain) return m_.known(step_, self_, info.pattern);
  auto p = payload_.find(info.loop);
  if (p == payload_.end()) throw RuntimeError("neighbor read '" + prettyPrint(e) + "' outside its edge loop");
  const NeighborSlot& ns = cs_.neighborSlots[std::size_t(cs_.componentSlotOf.at(info.loop))];
  auto f = std::find(ns.fields.begin(), ns.fields.end(), info.pattern.fields[0]);
  return (*p->second)[std::size_t(f - ns.fields.begin()) + 1];
}

Value CompiledEvaluator::comprehension(const Expr& e, Env& env) {
  auto it = cs_.pushedSlotOf.find(&e);
  if (it == cs_.pushedSlotOf.end()) return genericComprehension(e, env);
  int slot = cs_.neighborSlots[std::size_t(it->second)].slot;
  std::vector<Value> values;
  for (const Message& m : *inbox_)
    if (m.slot == slot) values.push_back(m.payload[0]);
  if (e.reduce == ReduceFunc::None) return Value::list(std::move(values));
  return reduceValues(*reduceAccOp(e.reduce), values);
}

void CompiledEvaluator::iterate(const void* node, const Expr& source, Env& env,
                                const std::function<void(const Value&)>& f) {
  auto it = cs_.componentSlotOf.find(node);
  if (it == cs_.componentSlotOf.end()) return Evaluator::iterate(node, source, env, f);
  int slot = cs_.neighborSlots[std::size_t(it->second)].slot;
  for (const Message& m : *inbox_) {
    if (m.slot != slot) continue;
    payload_[node] = &m.payload;
    f(Value::refVal(Value::integer(m.source), m.payload[0]));
  }
  payload_.erase(node);
}

void Machine::deliver(bool consume) {
  std::vector<Message> out = std::move(outbox_);
  outbox_.clear();
  if (!consume) {
    for (auto& box : inbox_) box.clear();
    return;
  }
  Delivery d = deliverMessages(std::move(out), stm_.slots, g_.stopped, options_.combiners,
                               options_.remoteOrderSeed ? &rng_ : nullptr);
  inbox_ = std::move(d.inbox);
  stats_->messagesCombined += d.delivered;
  stats_->remoteWritesDiscarded += d.discarded;
}

void Machine::absorb(int step, int round, VertexId x) {
  const CompiledStep& cs = stm_.steps[std::size_t(step)];
  Knowledge& k = knowledge_[std::size_t(step)][std::size_t(x)];
  for (const Message& m : inbox_[std::size_t(x)]) {
    const ChainRef& c = chainOf_[std::size_t(m.slot)];
    if (c.step != step || c.round != round) continue;
    const Send& send = cs.plan.rounds[std::size_t(round - 1)].sends[std::size_t(c.send)];
    if (send.to.empty()) {
      for (std::size_t i = 0; i < send.payload.size(); ++i) k.values[send.payload[i]] = m.payload[i];
    } else {
      k.origins[send.to].push_back(m.payload[0].asInt());
    }
  }
}

void Machine::chainRound(int step, int round) {
  const CompiledStep& cs = stm_.steps[std::size_t(step)];
  auto& know = knowledge_[std::size_t(step)];
  if (round == 1) know.assign(g_.size(), {});
  const auto& sends = cs.plan.rounds[std::size_t(round - 1)].sends;
  for (std::size_t v = 0; v < g_.size(); ++v) {
    VertexId x = VertexId(v);
    if (round > 1) absorb(step, round - 1, x);
    for (std::size_t k = 0; k < sends.size(); ++k) {
      const Send& s = sends[k];
      int slot = cs.sendSlots[std::size_t(round - 1)][k];
      std::vector<VertexId> self{x};
      const std::vector<VertexId>* origins = &self;
      if (!s.at.empty()) {
        auto it = know[v].origins.find(s.at);
        if (it == know[v].origins.end()) continue;
        origins = &it->second;
      }
      if (s.to.empty()) {
        std::vector<Value> values;
        for (const auto& p : s.payload) values.push_back(known(step, x, quotient(p, s.at)));
        for (VertexId u : *origins) emit({u, slot, x, values});
      } else {
        Value dest = known(step, x, quotient(s.to, s.at));
        if (!dest.isInt()) throw RuntimeError(s.to.str() + " at vertex " + std::to_string(x) + " is not a vertex id");
        for (VertexId u : *origins) emit({dest.asInt(), slot, x, {Value::integer(u)}});
      }
    }
  }
}

void Machine::neighborSend(int step) {
  const CompiledStep& cs = stm_.steps[std::size_t(step)];
  Evaluator sender(g_, *stm_.fields);
  for (std::size_t v = 0; v < g_.size(); ++v) {
    VertexId x = VertexId(v);
    for (const NeighborSlot& ns : cs.neighborSlots) {
      for (const Value& edge : g_.column(ns.senderList)[v].items()) {
        VertexId w = edge.items()[0].asInt();
        const Value& weight = edge.items()[1];
        if (!ns.pushed) {
          std::vector<Value> payload{weight};
          for (const auto& f : ns.fields) payload.push_back(g_.column(f)[v]);
          emit({w, ns.slot, x, std::move(payload)});
          continue;
        }
        const Expr& comp = *ns.comprehension;
        Env env{x, "", {{comp.name, Value::refVal(Value::integer(x), weight)}}};
        bool pass = true;
        for (std::size_t i = 0; i < comp.guardCount() && pass; ++i) pass = sender.eval(comp.guard(i), env).asBool();
        if (pass) emit({w, ns.slot, x, {sender.eval(comp.body(), env)}});
      }
    }
  }
}

void Machine::compute(int step) {
  const CompiledStep& cs = stm_.steps[std::size_t(step)];
  int rounds = int(cs.plan.size());
  GraphState next = g_;
  std::vector<RemoteWrite> remote;
  {
    CompiledEvaluator ev(g_, *stm_.fields, *this, cs, step);
    for (std::size_t v = 0; v < g_.size(); ++v) {
      if (g_.stopped[v]) continue;
      if (rounds > 0) absorb(step, rounds, VertexId(v));
      ev.setVertex(VertexId(v), inbox_[v]);
      Env env{VertexId(v), cs.step->vertexVar, {}};
      ev.execBlock(cs.step->body, env, next, remote);
    }
  }
  g_ = std::move(next);
  for (RemoteWrite& w : remote)
    emit({w.target, cs.remoteSlotOf.at(w.field), w.source, {std::move(w.value)}});
}

void Machine::applyRemote(int step) {
  const CompiledStep& cs = stm_.steps[std::size_t(step)];
  for (std::size_t v = 0; v < g_.size(); ++v) {
    if (g_.stopped[v]) continue;
    const auto& box = inbox_[v];
    for (std::size_t i = 0; i < box.size();) {
      std::size_t j = i + 1;
      while (j < box.size() && box[j].slot == box[i].slot) ++j;
      const Slot& slot = stm_.slots[std::size_t(box[i].slot)];
      if (slot.kind == Slot::Kind::Remote && slot.step == step) {
        const std::string& field = remoteField_[std::size_t(box[i].slot)];
        AccOp op = cs.remoteOpOf.at(field);
        Value acc = box[i].payload[0];
        for (std::size_t k = i + 1; k < j; ++k) acc = accApply(op, acc, box[k].payload[0]);
        Value& cell = g_.column(field)[v];
        cell = coerceForField(*stm_.fields, field, accApply(op, cell, acc));
      }
      i = j;
    }
  }
}

void Machine::stopIf(int stop) {
  const StopStep& s = *stm_.stops[std::size_t(stop)];
  Evaluator ev(g_, *stm_.fields);
  std::vector<bool> stopped = g_.stopped;
  for (std::size_t v = 0; v < g_.size(); ++v) {
    if (g_.stopped[v]) continue;
    Env env{VertexId(v), s.vertexVar, {}};
    if (ev.eval(*s.cond, env).asBool()) stopped[v] = true;
  }
  g_.stopped = std::move(stopped);
}

void Machine::vote(int loop) {
  if (evaluateFixVote(snapshots_[std::size_t(loop)], g_)) pending_[std::size_t(loop)] = true;
}

void Machine::runActions(const State& s) {
  for (const Action& a : s.actions) {
    switch (a.kind) {
      case Action::Kind::ChainRound: chainRound(a.step, a.round); break;
      case Action::Kind::NeighborSend: neighborSend(a.step); break;
      case Action::Kind::Compute: compute(a.step); break;
      case Action::Kind::ApplyRemote: applyRemote(a.step); break;
      case Action::Kind::StopIf: stopIf(a.stop); break;
      case Action::Kind::Snapshot: {
        auto& snap = snapshots_[std::size_t(a.loop)];
        snap.clear();
        for (const auto& f : stm_.loops[std::size_t(a.loop)].fixFields) snap[f] = g_.column(f);
        break;
      }
      case Action::Kind::Vote: vote(a.loop); break;
      case Action::Kind::VoteTrue: pending_[std::size_t(a.loop)] = true; break;
      case Action::Kind::Guard:
        if (!visible_[std::size_t(a.loop)]) return;
        break;
    }
  }
}

GraphState Machine::run(RunStats& stats) {
  stats_ = &stats;
  if (options_.remoteOrderSeed) rng_.seed(*options_.remoteOrderSeed);
  for (const Message& m : options_.initialMessages) {
    if (!g_.hasVertex(m.dest) || m.slot < 0 || std::size_t(m.slot) >= stm_.slots.size())
      throw RuntimeError("injected message has no valid destination or slot");
    outbox_.push_back(m);
  }
  int state = stm_.start;
  for (;;) {
    if (stats.supersteps == options_.superstepCap)
      throw DivergenceError("no halt within " + std::to_string(options_.superstepCap) + " supersteps");
    const State& s = stm_.states[std::size_t(state)];
    deliver(s.consumesMessages);
    ++stats.supersteps;
    std::fill(pending_.begin(), pending_.end(), false);
    runActions(s);
    const Transition& t = s.transition;
    if (t.kind == Transition::Kind::Halt) break;
    if (t.kind == Transition::Kind::Next) {
      state = t.next;
    } else if (visible_[std::size_t(t.loop)]) {
      ++iterations_[std::size_t(t.loop)];
      state = t.next;
    } else {
      stats.loopIterations.push_back(iterations_[std::size_t(t.loop)]);
      iterations_[std::size_t(t.loop)] = 0;
      state = t.otherwise;
    }
    visible_ = pending_;
  }
  return std::move(g_);
}

}  // namespace

Delivery deliverMessages(std::vector<Message> out, const std::vector<Slot>& slots, const std::vector<bool>& stopped,
                         bool combiners, std::mt19937_64* remoteShuffle) {
  Delivery d;
  d.inbox.resize(stopped.size());
  std::stable_sort(out.begin(), out.end(), [](const Message& a, const Message& b) {
    if (a.dest != b.dest) return a.dest < b.dest;
    if (a.slot != b.slot) return a.slot < b.slot;
    return a.source < b.source;
  });
  for (std::size_t i = 0; i < out.size();) {
    std::size_t j = i + 1;
    while (j < out.size() && out[j].dest == out[i].dest && out[j].slot == out[i].slot) ++j;
    auto dest = std::size_t(out[i].dest);
    const Slot& slot = slots[std::size_t(out[i].slot)];
    if (slot.kind == Slot::Kind::Remote) {
      if (stopped[dest]) {
        d.discarded += j - i;
        i = j;
        continue;
      }
      if (remoteShuffle)
        for (std::size_t k = j - i; k > 1; --k) std::swap(out[i + k - 1], out[i + (*remoteShuffle)() % k]);
    }
    auto& box = d.inbox[dest];
    std::size_t had = box.size();
    if (combiners && slot.combiner) {
      Value acc = out[i].payload[0];
      for (std::size_t k = i + 1; k < j; ++k) acc = accApply(*slot.combiner, acc, out[k].payload[0]);
      Message m = std::move(out[i]);
      m.payload[0] = std::move(acc);
      box.push_back(std::move(m));
    } else {
      for (std::size_t k = i; k < j; ++k) box.push_back(std::move(out[k]));
    }
    d.delivered += box.size() - had;
    i = j;
  }
  return d;
}

bool evaluateFixVote(const std::map<std::string, std::vector<Value>>& before, const GraphState& after) {
  for (const auto& [field, old] : before) {
    const auto& now = after.column(field);
    for (std::size_t v = 0; v < after.size(); ++v)
      if (!after.stopped[v] && !identical(old[v], now[v])) return true;
  }
  return false;
}

GraphState runSTM(const STM& stm, GraphState g, RunStats* stats, const RunOptions& options) {
  RunStats local;
  Machine m(stm, std::move(g), options);
  return m.run(stats ? *stats : local);
}

}  // namespace palgol
