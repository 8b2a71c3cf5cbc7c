// SPDX-License-Identifier: Apache-2.0

#include "palgol/chainplan.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <sstream>

#include "palgol/error.hpp"

namespace palgol {

std::string Proposition::str() const { return "∀u. " + knower.str() + " knows " + expr.str(); }

std::set<AccessPattern> subCandidates(const AccessPattern& e, const AccessPattern& v) {
  std::set<AccessPattern> out;
  for (std::size_t k = 0; k <= e.size(); ++k)
    out.insert(AccessPattern(std::vector<std::string>(e.fields.begin(), e.fields.begin() + k)));
  for (std::size_t k = 0; k < v.size(); ++k)
    out.insert(AccessPattern(std::vector<std::string>(v.fields.begin(), v.fields.begin() + k)));
  return out;
}

Proposition generalize(const Proposition& p) {
  if (isSubpattern(p.knower, p.expr)) return {{}, quotient(p.expr, p.knower)};
  return p;
}

Planner::Planner(std::function<bool(const std::string&)> isVertexField) : isVertexField_(std::move(isVertexField)) {}

std::vector<AccessPattern> Planner::candidates(const Proposition& p) const {
  std::vector<AccessPattern> out;
  for (const auto& w : subCandidates(p.expr, p.knower))
    if (w.empty() || !isVertexField_ || isVertexField_(w.fields.back())) out.push_back(w);
  return out;
}

void Planner::solve(const Proposition& target) {
  struct Option {
    AccessPattern via;
    Proposition a, b;
  };
  // Collect the unsolved propositions reachable from the target.
  std::map<Proposition, std::vector<Option>> pending;
  std::deque<Proposition> work{target};
  while (!work.empty()) {
    Proposition p = work.front();
    work.pop_front();
    if (p.isAxiom() || memo_.count(p) || pending.count(p)) continue;
    auto& opts = pending[p];
    for (const auto& w : candidates(p)) {
      Option o{w, generalize({w, p.expr}), generalize({w, p.knower})};
      work.push_back(o.a);
      work.push_back(o.b);
      opts.push_back(std::move(o));
    }
  }

  auto known = [&](const Proposition& p) -> std::optional<Choice> {
    if (p.isAxiom()) return Choice{{}, 0, 0};
    auto it = memo_.find(p);
    return it == memo_.end() ? std::nullopt : it->second;
  };

  // Round r settles every proposition whose best option has both premises
  // settled in earlier rounds; earlier solves may have settled some already.
  unsigned horizon = 1;
  for (const auto& [_, c] : memo_)
    if (c) horizon = std::max(horizon, c->cost + 1);
  for (unsigned round = 1; !pending.empty() && round <= horizon; ++round) {
    std::vector<std::pair<Proposition, Choice>> solved;
    for (const auto& [p, opts] : pending) {
      std::optional<Choice> best;
      for (const auto& o : opts) {
        auto a = known(o.a), b = known(o.b);
        if (!a || !b || a->cost >= round || b->cost >= round) continue;
        Choice c{o.via, round, 1 + a->sends + b->sends};
        // Options are visited in pattern order, so ties keep the smaller w.
        if (!best || c.sends < best->sends) best = c;
      }
      if (best) solved.emplace_back(p, *best);
    }
    if (!solved.empty()) horizon = std::max(horizon, round + 1);
    for (auto& [p, c] : solved) {
      memo_[p] = c;
      pending.erase(p);
    }
  }
  for (const auto& [p, _] : pending) memo_[p] = std::nullopt;
}

std::optional<unsigned> Planner::cost(const Proposition& raw) {
  Proposition p = generalize(raw);
  if (p.isAxiom()) return 0u;
  if (!memo_.count(p)) solve(p);
  const auto& c = memo_.at(p);
  return c ? std::optional<unsigned>(c->cost) : std::nullopt;
}

unsigned Planner::planCost(const Proposition& p) {
  auto c = cost(p);
  if (!c) throw PlanningError(Span{}, "no derivation for " + p.str());
  return *c;
}

const Planner::Choice& Planner::choice(const Proposition& raw) {
  Proposition p = generalize(raw);
  planCost(p);
  return *memo_.at(p);
}

unsigned planCost(const Proposition& p) { return Planner().planCost(p); }

std::string stableTag(const std::string& prefix, const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%08llx", static_cast<unsigned long long>(h & 0xffffffffull));
  return prefix + buf;
}

CommPlan derivePlan(const std::set<AccessPattern>& chains, Planner& planner) {
  CommPlan plan;
  plan.targets = chains;
  std::map<Proposition, Fact> facts;
  std::vector<Proposition> work;
  for (const auto& c : chains) work.push_back({{}, c});
  while (!work.empty()) {
    Proposition p = generalize(work.back());
    work.pop_back();
    if (p.isAxiom() || facts.count(p)) continue;
    const auto& ch = planner.choice(p);
    facts[p] = {p, ch.via, ch.cost, stableTag("f", p.str())};
    work.push_back({ch.via, p.expr});
    work.push_back({ch.via, p.knower});
  }
  if (facts.empty()) return plan;

  unsigned rounds = 0;
  for (const auto& [_, f] : facts) rounds = std::max(rounds, f.round);
  plan.rounds.resize(rounds);
  for (const auto& [_, f] : facts) plan.facts.push_back(f);
  std::stable_sort(plan.facts.begin(), plan.facts.end(),
                   [](const Fact& a, const Fact& b) { return a.round < b.round; });

  // Merge sends with the same endpoints inside a round.
  for (unsigned r = 1; r <= rounds; ++r) {
    std::map<std::pair<AccessPattern, AccessPattern>, Send> merged;
    for (const auto& f : plan.facts) {
      if (f.round != r) continue;
      Send& s = merged[{f.via, f.prop.knower}];
      s.at = f.via;
      s.to = f.prop.knower;
      s.payload.push_back(f.prop.knower.empty() ? f.prop.expr : AccessPattern{});
      s.slotTags.push_back(f.tag);
    }
    for (auto& [key, s] : merged) {
      std::string text = std::to_string(r) + ":" + s.at.str() + "->" + s.to.str();
      for (const auto& t : s.slotTags) text += ":" + t;
      s.slot = stableTag("m", text);
      plan.rounds[r - 1].sends.push_back(std::move(s));
    }
  }
  return plan;
}

CommPlan derivePlan(const std::set<AccessPattern>& chains) {
  Planner planner;
  return derivePlan(chains, planner);
}

std::string CommPlan::derivation() const {
  std::ostringstream os;
  for (const auto& f : facts) {
    Proposition viaExpr{f.via, f.prop.expr}, viaKnower{f.via, f.prop.knower};
    os << "(" << viaExpr.str() << ") ∧ (" << viaKnower.str() << ") ⟹ " << f.prop.str() << "\n";
  }
  return os.str();
}

std::string CommPlan::str() const {
  std::ostringstream os;
  for (std::size_t r = 0; r < rounds.size(); ++r) {
    for (const auto& s : rounds[r].sends) {
      os << "round " << r + 1 << ": " << s.at.str() << " sends [";
      for (std::size_t i = 0; i < s.payload.size(); ++i) os << (i ? ", " : "") << s.payload[i].str();
      os << "] to " << s.to.str() << "  (" << s.slot << ")\n";
    }
  }
  return os.str();
}

}  // namespace palgol
