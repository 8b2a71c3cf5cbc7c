// SPDX-License-Identifier: Apache-2.0
//
// State-transition machines of supersteps: the compiled form of a program.
// An STM refers to the AST and plans it was compiled from, so the
// CheckedProgram must outlive it.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "palgol/ast.hpp"
#include "palgol/chainplan.hpp"
#include "palgol/sema.hpp"

namespace palgol {

enum class StateKind : std::uint8_t { Init, RemoteRead, Main, RemoteUpdate, Check, Stop, Exit };
const char* stateKindName(StateKind k);

struct Action {
  enum class Kind : std::uint8_t {
    ChainRound,    // absorb round-1 chain messages, send round `round`
    NeighborSend,  // push neighbor fields (or pushed comprehension values) along edges
    Compute,       // absorb last chain round and neighbor messages, run the step body
    ApplyRemote,   // fold remote-write messages into fields
    StopIf,        // mark vertices whose stop condition holds
    Snapshot,      // remember the loop's fix fields
    Vote,          // OR "fix fields changed" into the aggregator
    VoteTrue,      // force the aggregator so a loop body runs at least once
    Guard,         // skip the rest of the state when the aggregator is false
  };
  Kind kind;
  int step = -1;   // ChainRound, NeighborSend, Compute, ApplyRemote
  int round = 0;   // ChainRound
  int loop = -1;   // Snapshot, Vote, VoteTrue, Guard
  int stop = -1;   // StopIf
};

struct Transition {
  enum class Kind : std::uint8_t { Next, Cond, Halt };
  Kind kind = Kind::Halt;
  int next = -1;      // Next target, or Cond target when the aggregator is true
  int otherwise = -1; // Cond target when false
  int loop = -1;      // Cond: the loop whose iteration this decides
};

struct State {
  StateKind kind = StateKind::Main;
  std::vector<Action> actions;
  bool consumesMessages = false;
  Transition transition;
};

struct Slot {
  enum class Kind : std::uint8_t { Chain, Pushed, Component, Remote };
  Kind kind;
  std::string name;
  int step = -1;
  std::optional<AccOp> combiner;
  std::string detail;  // human-readable description for dumps
};

/// A neighbor-data slot: what each sender puts on its edges.
struct NeighborSlot {
  int slot = -1;
  std::string receiverList;  // edge list the receiving loop walks
  std::string senderList;    // edge list the sender pushes along
  bool pushed = false;
  const Expr* comprehension = nullptr;  // pushed: representative comprehension
  std::vector<std::string> fields;      // component: payload is [e.val, fields...]
};

struct CompiledStep {
  const Step* step = nullptr;
  RemoteReads reads;
  CommPlan plan;
  int remoteReadSupersteps = 0;
  std::vector<std::vector<int>> sendSlots;  // [round][send] -> slot id
  std::vector<NeighborSlot> neighborSlots;
  std::map<const void*, int> pushedSlotOf;     // comprehension -> index into neighborSlots
  std::map<const void*, int> componentSlotOf;  // edge loop -> index into neighborSlots
  std::map<std::string, int> remoteSlotOf;     // field -> slot id
  std::map<std::string, AccOp> remoteOpOf;
};

struct LoopInfo {
  std::vector<std::string> fixFields;
  bool fused = false;
  int bodyStates = 0;  // supersteps per iteration in the compiled layout
};

struct STM {
  std::vector<State> states;
  int start = 0;
  int end = 0;

  std::vector<CompiledStep> steps;
  std::vector<LoopInfo> loops;
  std::vector<const StopStep*> stops;
  std::vector<Slot> slots;
  const FieldTable* fields = nullptr;

  /// Golden-file text: slots, then states with actions and transitions.
  std::string str() const;
};

}  // namespace palgol
