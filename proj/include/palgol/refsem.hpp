// SPDX-License-Identifier: Apache-2.0
//
// Reference interpreter: runs programs directly with snapshot reads,
// intermediate local writes and an order-independent remote update phase.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "palgol/graph.hpp"
#include "palgol/interp.hpp"
#include "palgol/sema.hpp"

namespace palgol {

struct RefStats {
  std::vector<std::size_t> iterationsPerLoop;  // one entry per loop exit, in exit order
  std::size_t remoteWritesDiscarded = 0;
};

struct RefOptions {
  std::size_t iterationCap = 1000000;
  /// When set, remote writes are applied in this seeded random order
  /// instead of the canonical (source, statement) order.
  std::optional<std::uint64_t> remoteOrderSeed;
};

/// Folds each (target, field) group of writes with its operator and then
/// applies the result to `next`. Writes to stopped vertices are dropped;
/// returns how many were dropped. `writes` must be in canonical order
/// unless a shuffle seed is given.
std::size_t applyRemoteWrites(GraphState& next, std::vector<RemoteWrite> writes, const FieldTable& types,
                              std::optional<std::uint64_t> shuffleSeed = std::nullopt);

GraphState execStep(const Step& step, const GraphState& g, const FieldTable& types, RefStats* stats = nullptr,
                    const RefOptions& options = {});
GraphState execStop(const StopStep& stop, const GraphState& g, const FieldTable& types);
GraphState execProgram(const Program& p, GraphState g, const FieldTable& types, RefStats* stats = nullptr,
                       const RefOptions& options = {});

}  // namespace palgol
