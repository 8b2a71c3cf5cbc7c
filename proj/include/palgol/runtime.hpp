// SPDX-License-Identifier: Apache-2.0
//
// Superstep-synchronous execution of compiled STMs. Every vertex runs the
// same state; messages sent in one superstep are delivered at the start of
// the next, grouped by slot and ordered by source.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "palgol/graph.hpp"
#include "palgol/stm.hpp"

namespace palgol {

struct Message {
  VertexId dest = 0;
  int slot = -1;
  VertexId source = 0;
  std::vector<Value> payload;
};

struct RunStats {
  std::size_t supersteps = 0;
  std::size_t messagesSent = 0;
  std::size_t messagesCombined = 0;  // delivered after combining
  std::size_t remoteWritesDiscarded = 0;
  std::vector<std::size_t> loopIterations;  // one entry per loop exit

  /// "supersteps=12\nmessages_sent=..." one key per line.
  std::string str() const;
};

struct RunOptions {
  std::size_t superstepCap = 1000000;
  bool combiners = true;
  /// Delivered at the first superstep, which must ignore them.
  std::vector<Message> initialMessages;
  /// Shuffles each remote-update group before folding.
  std::optional<std::uint64_t> remoteOrderSeed;
};

struct Delivery {
  std::vector<std::vector<Message>> inbox;  // per vertex, ordered by (slot, source)
  std::size_t delivered = 0;
  std::size_t discarded = 0;  // remote updates addressed to stopped vertices
};

/// Groups messages by destination and slot, keeping send order within a
/// source. Remote updates to stopped vertices are dropped; the remaining
/// remote-update groups are shuffled when `remoteShuffle` is given. Slots
/// with a combiner fold into one message when `combiners` is set.
Delivery deliverMessages(std::vector<Message> outbox, const std::vector<Slot>& slots,
                         const std::vector<bool>& stopped, bool combiners, std::mt19937_64* remoteShuffle = nullptr);

/// True iff some non-stopped vertex changed one of the snapshotted fields.
bool evaluateFixVote(const std::map<std::string, std::vector<Value>>& before, const GraphState& after);

/// Runs `stm` on a graph already prepared for its field table.
/// Throws RuntimeError on bad reads or writes and DivergenceError once
/// the superstep cap is hit.
GraphState runSTM(const STM& stm, GraphState g, RunStats* stats = nullptr, const RunOptions& options = {});

}  // namespace palgol
