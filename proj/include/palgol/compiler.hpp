// SPDX-License-Identifier: Apache-2.0
//
// Lowering of checked programs to STMs. Steps become remote-read, main and
// remote-update supersteps; sequences merge the boundary states; loops get
// a do-until check that fusion folds into the second body state.

#pragma once

#include "palgol/stm.hpp"

namespace palgol {

struct CompileOptions {
  bool fuse = true;
  bool combiners = true;
};

/// Builds STM fragments. Fragments share the program-wide tables (steps,
/// loops, slots) held by the compiler; only their states differ.
class Compiler {
 public:
  explicit Compiler(const CheckedProgram& program);

  /// RR supersteps (chain rounds, neighbor sends in the last one), then
  /// Main, then RemoteUpdate when the step writes remotely.
  STM compileStep(const Step& step);
  /// A single Stop state.
  STM compileStop(const StopStep& stop);
  /// General do-until layout with its own check superstep.
  STM compileIter(STM body, const std::vector<std::string>& fixFields);
  /// Fused layout; returns compileIter's result when the body does not
  /// begin with a remote-read state or has a single state.
  STM fuseIteration(STM body, const std::vector<std::string>& fixFields);
  STM compileItems(const Program& p, bool fuse);

  /// The program-wide tables with `fragment`'s states.
  STM finish(STM fragment) const;

 private:
  void lowerNeighborhoodAccess(CompiledStep& cs, int stepIndex);
  int addSlot(Slot s);

  const CheckedProgram& program_;
  STM tables_;
};

/// Concatenates two fragments, merging a's end state into b's start state
/// unless either is a stop state.
STM compileSeq(STM a, STM b);

/// Attaches combiners to pushed-comprehension slots whose every consumer
/// folds with the same operator, and to remote-update slots.
void detectCombiners(STM& stm);

STM compileProgram(const CheckedProgram& program, const CompileOptions& options = {});

}  // namespace palgol
