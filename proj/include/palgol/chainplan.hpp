// SPDX-License-Identifier: Apache-2.0
//
// Planning of chain accesses. A proposition "forall u. K(u) knows E(u)"
// is derived from the axioms "u knows u", "u knows F[u]" and message
// passing: if W(u) knows both E(u) and K(u), it can send E(u) to K(u).
// The planner finds derivations with the fewest communication rounds.

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "palgol/pattern.hpp"

namespace palgol {

struct Proposition {
  AccessPattern knower;
  AccessPattern expr;

  bool isAxiom() const { return knower.empty() && expr.size() <= 1; }
  /// "forall u. D[u] knows u"
  std::string str() const;
  auto operator<=>(const Proposition&) const = default;
  bool operator==(const Proposition&) const = default;
};

/// Sub(e, v) = { c | c ⪯ e or c ≺ v }.
std::set<AccessPattern> subCandidates(const AccessPattern& e, const AccessPattern& v);

/// (a knows b) becomes (u knows b/a) when a ⪯ b.
Proposition generalize(const Proposition& p);

/// Memoized minimum-round search. Costs are computed level by level over
/// the finite set of propositions reachable from a target, which gives the
/// least solution of the step recursion without a recursion-stack guard.
class Planner {
 public:
  /// Intermediate vertices must be vertex-valued; `isVertexField` tells
  /// which fields hold vertex ids. By default every field does.
  explicit Planner(std::function<bool(const std::string&)> isVertexField = {});

  struct Choice {
    AccessPattern via;        // the intermediate vertex w(u)
    unsigned cost = 0;        // rounds
    unsigned sends = 0;       // message-passing steps in the derivation tree
  };

  /// Rounds needed, or nullopt if the proposition is not derivable.
  std::optional<unsigned> cost(const Proposition& p);
  /// As cost(), throwing PlanningError when not derivable.
  unsigned planCost(const Proposition& p);
  /// The chosen derivation step for a generalized, non-axiom proposition.
  const Choice& choice(const Proposition& p);

  /// Candidates for w(u) actually considered for `p`.
  std::vector<AccessPattern> candidates(const Proposition& p) const;

 private:
  void solve(const Proposition& target);

  std::function<bool(const std::string&)> isVertexField_;
  std::map<Proposition, std::optional<Choice>> memo_;
};

unsigned planCost(const Proposition& p);

/// One derived fact: `prop` becomes known in `round` by w = `via` sending.
struct Fact {
  Proposition prop;
  AccessPattern via;
  unsigned round = 0;
  std::string tag;
};

/// One message per origin u per round: the vertex at(u) sends to to(u).
/// When `to` is u the payload carries expression values; otherwise it
/// carries u's own id (payload = {u}).
struct Send {
  AccessPattern at;
  AccessPattern to;
  std::vector<AccessPattern> payload;
  std::vector<std::string> slotTags;  // one per payload component
  std::string slot;                   // identifies the merged message
};

struct PlanRound {
  std::vector<Send> sends;
};

struct CommPlan {
  std::vector<PlanRound> rounds;
  std::vector<Fact> facts;  // every derived fact, ordered by round
  std::set<AccessPattern> targets;

  std::size_t size() const { return rounds.size(); }
  /// The derivation, one implication per line, in round order.
  std::string derivation() const;
  /// The rounds as sends, e.g. "round 1: D[u] <- u from u".
  std::string str() const;
};

/// Plans "u knows c" for every chain c, sharing sub-derivations.
CommPlan derivePlan(const std::set<AccessPattern>& chains, Planner& planner);
CommPlan derivePlan(const std::set<AccessPattern>& chains);

/// FNV-1a of `text`, rendered as a short slot tag.
std::string stableTag(const std::string& prefix, const std::string& text);

}  // namespace palgol
