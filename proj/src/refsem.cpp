// SPDX-License-Identifier: Apache-2.0

#include "palgol/refsem.hpp"

#include <algorithm>
#include <random>

namespace palgol {

std::size_t applyRemoteWrites(GraphState& next, std::vector<RemoteWrite> writes, const FieldTable& types,
                              std::optional<std::uint64_t> shuffleSeed) {
  if (shuffleSeed) {
    std::mt19937_64 rng(*shuffleSeed);
    for (std::size_t i = writes.size(); i > 1; --i) std::swap(writes[i - 1], writes[rng() % i]);
  }
  // Stable: keeps the canonical source order inside each group.
  std::stable_sort(writes.begin(), writes.end(), [](const RemoteWrite& a, const RemoteWrite& b) {
    return a.target != b.target ? a.target < b.target : a.field < b.field;
  });
  std::size_t discarded = 0;
  for (std::size_t i = 0; i < writes.size();) {
    std::size_t j = i + 1;
    while (j < writes.size() && writes[j].target == writes[i].target && writes[j].field == writes[i].field) ++j;
    const RemoteWrite& w = writes[i];
    if (next.stopped[std::size_t(w.target)]) {
      discarded += j - i;
    } else {
      Value combined = w.value;
      for (std::size_t k = i + 1; k < j; ++k) combined = accApply(w.op, combined, writes[k].value);
      Value& slot = next.column(w.field)[std::size_t(w.target)];
      slot = coerceForField(types, w.field, accApply(w.op, slot, combined));
    }
    i = j;
  }
  return discarded;
}

GraphState execStep(const Step& step, const GraphState& g, const FieldTable& types, RefStats* stats,
                    const RefOptions& options) {
  GraphState next = g;
  std::vector<RemoteWrite> remote;
  Evaluator ev(g, types);
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (g.stopped[v]) continue;
    Env env{VertexId(v), step.vertexVar, {}};
    ev.execBlock(step.body, env, next, remote);
  }
  std::size_t dropped = applyRemoteWrites(next, std::move(remote), types, options.remoteOrderSeed);
  if (stats) stats->remoteWritesDiscarded += dropped;
  return next;
}

GraphState execStop(const StopStep& stop, const GraphState& g, const FieldTable& types) {
  GraphState next = g;
  Evaluator ev(g, types);
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (g.stopped[v]) continue;
    Env env{VertexId(v), stop.vertexVar, {}};
    if (ev.eval(*stop.cond, env).asBool()) next.stopped[v] = true;
  }
  return next;
}

namespace {

bool fixChanged(const GraphState& before, const GraphState& after, const std::vector<std::string>& fields) {
  for (const auto& f : fields) {
    const auto& a = before.column(f);
    const auto& b = after.column(f);
    for (std::size_t v = 0; v < after.size(); ++v)
      if (!after.stopped[v] && !identical(a[v], b[v])) return true;
  }
  return false;
}

}  // namespace

GraphState execProgram(const Program& p, GraphState g, const FieldTable& types, RefStats* stats,
                       const RefOptions& options) {
  for (const auto& item : p.items) {
    if (const auto* step = std::get_if<Step>(&item)) {
      g = execStep(*step, g, types, stats, options);
    } else if (const auto* stop = std::get_if<StopStep>(&item)) {
      g = execStop(*stop, g, types);
    } else {
      const auto& it = std::get<Iter>(item);
      std::size_t iterations = 0;
      for (;;) {
        if (iterations == options.iterationCap)
          throw DivergenceError("fixed-point loop did not converge within " + std::to_string(options.iterationCap) +
                                " iterations");
        GraphState before = g;
        g = execProgram(*it.body, std::move(g), types, stats, options);
        ++iterations;
        if (!fixChanged(before, g, it.fixFields)) break;
      }
      if (stats) stats->iterationsPerLoop.push_back(iterations);
    }
  }
  return g;
}

}  // namespace palgol
