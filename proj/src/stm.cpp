// SPDX-License-Identifier: Apache-2.0

#include "palgol/stm.hpp"

#include <sstream>

namespace palgol {

const char* stateKindName(StateKind k) {
  switch (k) {
    case StateKind::Init: return "init";
    case StateKind::RemoteRead: return "remote-read";
    case StateKind::Main: return "main";
    case StateKind::RemoteUpdate: return "remote-update";
    case StateKind::Check: return "check";
    case StateKind::Stop: return "stop";
    case StateKind::Exit: return "exit";
  }
  return "?";
}

namespace {

const char* slotKindName(Slot::Kind k) {
  switch (k) {
    case Slot::Kind::Chain: return "chain";
    case Slot::Kind::Pushed: return "pushed";
    case Slot::Kind::Component: return "component";
    case Slot::Kind::Remote: return "remote";
  }
  return "?";
}

std::string actionText(const Action& a, const STM& m) {
  std::string step = "step" + std::to_string(a.step), loop = "loop" + std::to_string(a.loop);
  switch (a.kind) {
    case Action::Kind::ChainRound: return "chain-round " + step + " round" + std::to_string(a.round);
    case Action::Kind::NeighborSend: return "neighbor-send " + step;
    case Action::Kind::Compute: return "compute " + step;
    case Action::Kind::ApplyRemote: return "apply-remote " + step;
    case Action::Kind::StopIf: return "stop-if stop" + std::to_string(a.stop);
    case Action::Kind::Snapshot: {
      std::string s = "snapshot " + loop + " [";
      const auto& fix = m.loops[std::size_t(a.loop)].fixFields;
      for (std::size_t i = 0; i < fix.size(); ++i) s += (i ? ", " : "") + fix[i];
      return s + "]";
    }
    case Action::Kind::Vote: return "vote " + loop;
    case Action::Kind::VoteTrue: return "vote-true " + loop;
    case Action::Kind::Guard: return "guard " + loop;
  }
  return "?";
}

}  // namespace

std::string STM::str() const {
  std::ostringstream os;
  os << "stm start=S" << start << " end=S" << end << "\n";
  for (std::size_t i = 0; i < loops.size(); ++i)
    os << "loop" << i << (loops[i].fused ? " fused" : " unfused") << " body=" << loops[i].bodyStates << "\n";
  for (const Slot& s : slots) {
    os << "slot " << s.name << " " << slotKindName(s.kind) << " step" << s.step;
    if (s.combiner) os << " combine=" << accOpName(*s.combiner);
    os << " " << s.detail << "\n";
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    const State& s = states[i];
    os << "S" << i << " " << stateKindName(s.kind) << (s.consumesMessages ? " consumes" : "") << "\n";
    for (const Action& a : s.actions) os << "  " << actionText(a, *this) << "\n";
    switch (s.transition.kind) {
      case Transition::Kind::Next: os << "  -> S" << s.transition.next << "\n"; break;
      case Transition::Kind::Cond:
        os << "  -> loop" << s.transition.loop << " ? S" << s.transition.next << " : S" << s.transition.otherwise
           << "\n";
        break;
      case Transition::Kind::Halt: os << "  halt\n"; break;
    }
  }
  return os.str();
}

}  // namespace palgol
