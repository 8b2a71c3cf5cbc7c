// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <fstream>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>

namespace oracle {

using palgol::Proposition;

std::string corpus(const std::string& name) {
  std::ifstream in(std::string(PALGOL_SOURCE_DIR) + "/programs/" + name + ".pal");
  if (!in) throw std::runtime_error("missing corpus program " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::optional<std::int64_t>> dijkstra(const GraphState& g) {
  std::vector<std::optional<std::int64_t>> dist(g.size());
  using Item = std::pair<std::int64_t, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  if (g.size() == 0) return dist;
  dist[0] = 0;
  pq.push({0, 0});
  const auto& out = g.column("Out");
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d != *dist[v]) continue;
    for (const auto& e : out[v].items()) {
      auto w = std::size_t(e.items()[0].asInt());
      std::int64_t nd = d + e.items()[1].asInt();
      if (!dist[w] || nd < *dist[w]) {
        dist[w] = nd;
        pq.push({nd, w});
      }
    }
  }
  return dist;
}

std::vector<VertexId> componentMinima(const GraphState& g) {
  std::vector<std::size_t> parent(g.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const auto& nbr = g.column("Nbr");
  for (std::size_t v = 0; v < g.size(); ++v)
    for (const auto& e : nbr[v].items()) {
      std::size_t a = find(v), b = find(std::size_t(e.items()[0].asInt()));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);  // the root is always the minimum
    }
  std::vector<VertexId> out(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) out[v] = VertexId(find(v));
  return out;
}

std::vector<std::int64_t> prefixSums(const GraphState& g) {
  const auto& pred = g.column("Pred");
  const auto& val = g.column("Val");
  std::size_t n = g.size();
  std::vector<std::optional<std::int64_t>> sum(n);
  for (std::size_t start = 0; start < n; ++start) {
    std::vector<std::size_t> path;
    std::size_t x = start;
    while (!sum[x]) {
      std::size_t p = std::size_t(pred[x].asInt());
      if (p == x) {
        sum[x] = val[x].asInt();
        break;
      }
      path.push_back(x);
      x = p;
      if (path.size() > n) throw std::runtime_error("Pred does not form a list");
    }
    // Walking back up: Sum[y] = Val[y] + Sum[Pred[y]], except right above the head.
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      std::size_t y = *it, p = std::size_t(pred[y].asInt());
      bool aboveHead = std::size_t(pred[p].asInt()) == p;
      sum[y] = val[y].asInt() + (aboveHead ? 0 : *sum[p]);
    }
  }
  std::vector<std::int64_t> out(n);
  for (std::size_t v = 0; v < n; ++v) out[v] = *sum[v];
  return out;
}

std::vector<AccessPattern> allPatterns(const std::vector<std::string>& fields, std::size_t maxLen) {
  std::vector<AccessPattern> out;
  std::vector<AccessPattern> layer{AccessPattern{}};
  for (std::size_t len = 1; len <= maxLen; ++len) {
    std::vector<AccessPattern> nextLayer;
    for (const auto& p : layer)
      for (const auto& f : fields) nextLayer.push_back(p.extended(f));
    out.insert(out.end(), nextLayer.begin(), nextLayer.end());
    layer = std::move(nextLayer);
  }
  return out;
}

std::map<Proposition, unsigned> knowledgeBfs(const std::vector<std::string>& fields, std::size_t maxLen) {
  std::vector<AccessPattern> universe{AccessPattern{}};
  for (auto& p : allPatterns(fields, maxLen)) universe.push_back(p);
  std::map<AccessPattern, std::size_t> index;
  for (std::size_t i = 0; i < universe.size(); ++i) index[universe[i]] = i;
  std::size_t n = universe.size();

  // knows[k * n + e]: vertex k(u) knows value e(u), for every u.
  std::vector<int> round(n * n, -1);
  auto at = [&](std::size_t k, std::size_t e) -> int& { return round[k * n + e]; };

  // Adds (k, e) and every instance (p.k, p.e) that fits in the universe.
  auto addClosed = [&](std::size_t k, std::size_t e, int r, std::vector<std::pair<std::size_t, std::size_t>>& added) {
    std::vector<std::pair<std::size_t, std::size_t>> work{{k, e}};
    while (!work.empty()) {
      auto [a, b] = work.back();
      work.pop_back();
      if (at(a, b) >= 0) continue;
      at(a, b) = r;
      added.push_back({a, b});
      for (const auto& f : fields) {
        // Instantiating u := f[u] prepends f to both patterns.
        AccessPattern pa = AccessPattern{f}.concat(universe[a]);
        AccessPattern pb = AccessPattern{f}.concat(universe[b]);
        auto ia = index.find(pa), ib = index.find(pb);
        if (ia != index.end() && ib != index.end()) work.push_back({ia->second, ib->second});
      }
    }
  };

  std::vector<std::pair<std::size_t, std::size_t>> added;
  for (std::size_t k = 0; k < n; ++k) {
    addClosed(k, k, 0, added);
    for (const auto& f : fields) {
      auto it = index.find(universe[k].extended(f));
      if (it != index.end()) addClosed(k, it->second, 0, added);
    }
  }
  for (int r = 1;; ++r) {
    std::vector<std::vector<std::size_t>> knownBy(n);
    for (std::size_t w = 0; w < n; ++w)
      for (std::size_t e = 0; e < n; ++e)
        if (at(w, e) >= 0) knownBy[w].push_back(e);
    std::vector<std::pair<std::size_t, std::size_t>> fresh;
    // w knows e and w knows k: w sends e to k.
    for (std::size_t w = 0; w < n; ++w)
      for (std::size_t k : knownBy[w])
        for (std::size_t e : knownBy[w])
          if (at(k, e) < 0) fresh.push_back({k, e});
    added.clear();
    for (auto [k, e] : fresh) addClosed(k, e, r, added);
    if (added.empty()) break;
  }

  std::map<Proposition, unsigned> out;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t e = 0; e < n; ++e)
      if (at(k, e) >= 0) out[{universe[k], universe[e]}] = unsigned(at(k, e));
  return out;
}

namespace {

std::optional<unsigned> recurse(const Proposition& raw, std::set<Proposition>& stack) {
  Proposition p = palgol::generalize(raw);
  if (p.isAxiom()) return 0u;
  if (stack.count(p)) return std::nullopt;
  stack.insert(p);
  std::optional<unsigned> best;
  for (const auto& w : palgol::subCandidates(p.expr, p.knower)) {
    auto a = recurse({w, p.expr}, stack);
    if (!a) continue;
    auto b = recurse({w, p.knower}, stack);
    if (!b) continue;
    unsigned c = 1 + std::max(*a, *b);
    if (!best || c < *best) best = c;
  }
  stack.erase(p);
  return best;
}

}  // namespace

std::optional<unsigned> recursiveCost(const Proposition& p) {
  std::set<Proposition> stack;
  return recurse(p, stack);
}

std::vector<std::string> planProblems(const palgol::CommPlan& plan) {
  std::vector<std::string> problems;
  std::set<Proposition> known;
  auto holds = [&](const Proposition& raw) {
    Proposition p = palgol::generalize(raw);
    return p.isAxiom() || known.count(p) != 0;
  };
  for (std::size_t r = 0; r < plan.rounds.size(); ++r) {
    std::vector<Proposition> learned;
    std::string where = "round " + std::to_string(r + 1) + ": ";
    for (const auto& s : plan.rounds[r].sends) {
      if (!holds({s.at, {}})) problems.push_back(where + s.at.str() + " does not know its origin u");
      if (s.to.empty()) {
        for (const auto& p : s.payload) {
          if (!holds({s.at, p})) problems.push_back(where + s.at.str() + " does not know " + p.str());
          learned.push_back({{}, p});
        }
      } else {
        if (!holds({s.at, s.to})) problems.push_back(where + s.at.str() + " does not know " + s.to.str());
        learned.push_back({s.to, {}});
      }
    }
    for (const auto& p : learned) known.insert(palgol::generalize(p));
  }
  for (const auto& t : plan.targets)
    if (!holds({{}, t})) problems.push_back("target " + t.str() + " never known");
  return problems;
}

void randomizeFields(GraphState& g, const palgol::FieldTable& fields, std::uint64_t seed) {
  using Base = palgol::ValueType::Base;
  std::mt19937_64 rng(seed);
  for (const auto& [name, info] : fields.all()) {
    if (info.predefined) continue;
    if (info.type.base != Base::Int && info.type.base != Base::Vertex) continue;
    auto& col = g.column(name);
    for (auto& cell : col)
      cell = palgol::Value::integer(info.type.base == Base::Int ? std::int64_t(rng() % 10)
                                                                 : std::int64_t(rng() % g.size()));
  }
}

}  // namespace oracle
