// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion with the measured
// numbers and wall time. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "palgol/compiler.hpp"
#include "palgol/parser.hpp"
#include "palgol/printer.hpp"
#include "palgol/refsem.hpp"
#include "palgol/runtime.hpp"

using namespace palgol;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream note;

  void require(bool cond, const std::string& why) {
    if (!cond && ok) {
      ok = false;
      note << "first failure: " << why << "; ";
    }
  }
};

int failures = 0;

void criterion(const char* name, double limitSeconds, const std::function<void(Outcome&)>& body) {
  Outcome out;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limitSeconds > 0) out.require(secs < limitSeconds, "over the time limit");
  failures += !out.ok;
  std::string note = out.note.str();
  std::printf("%s %-26s %s[%.3fs%s]\n", out.ok ? "PASS" : "FAIL", name, note.c_str(), secs,
              limitSeconds > 0 ? (" < " + std::to_string(int(limitSeconds)) + "s").c_str() : "");
  std::fflush(stdout);
}

AccessPattern power(const std::string& f, std::size_t n) {
  AccessPattern p;
  for (std::size_t i = 0; i < n; ++i) p = p.extended(f);
  return p;
}

struct Corpus {
  CheckedProgram sssp = checkSource(oracle::corpus("sssp"));
  CheckedProgram sv = checkSource(oracle::corpus("sv"));
  CheckedProgram lr = checkSource(oracle::corpus("lr"));
};

GraphState prepared(GraphState g, const CheckedProgram& cp) {
  prepareGraph(g, cp.fields);
  return g;
}

GraphState ssspInput(std::uint64_t seed, std::size_t n) { return randomGraph(seed, n, 3 * n, GraphKind::Weighted); }
GraphState svInput(std::uint64_t seed, std::size_t n) { return randomGraph(seed, n, n, GraphKind::Undirected); }

GraphState withRandomVals(std::uint64_t seed, std::size_t n) {
  GraphState g = randomChain(seed, n);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const auto& pred = g.column("Pred");
  auto& val = g.column("Val");
  for (std::size_t v = 0; v < n; ++v)
    if (pred[v].asInt() != VertexId(v)) val[v] = Value::integer(std::int64_t(rng() % 1000));
  return g;
}

std::size_t sizeFor(std::uint64_t seed) { return 1 + (seed * 197) % 1000; }

RunStats runCompiled(const CheckedProgram& cp, const GraphState& g, GraphState* out = nullptr,
                     CompileOptions co = {}) {
  RunStats stats;
  RunOptions ro;
  ro.combiners = co.combiners;
  GraphState r = runSTM(compileProgram(cp, co), g, &stats, ro);
  if (out) *out = std::move(r);
  return stats;
}

}  // namespace

int main() {
  Corpus c;

  criterion("planner-known-costs", 1, [](Outcome& o) {
    Planner planner;
    unsigned d2 = planner.planCost({{}, power("D", 2)}), d4 = planner.planCost({{}, power("D", 4)});
    CommPlan plan = derivePlan({power("D", 4)}, planner);
    o.note << "D2=" << d2 << " D4=" << d4 << " rounds=" << plan.size() << " ";
    o.require(d2 == 2, "D2 cost");
    o.require(d4 == 3, "D4 cost");
    o.require(plan.size() == 3, "D4 plan length");
    o.require(oracle::planProblems(plan).empty(), "plan uses unknown facts");
    // u asks D[u]; D[u] replies D^2 and forwards u; D^2[u] answers with D^4.
    const AccessPattern D{"D"}, DD = power("D", 2);
    bool shape = plan.rounds[0].sends.size() == 1 && plan.rounds[0].sends[0].at.empty() &&
                 plan.rounds[0].sends[0].to == D && plan.rounds[1].sends.size() == 2 &&
                 plan.rounds[2].sends.size() == 1 && plan.rounds[2].sends[0].at == DD &&
                 plan.rounds[2].sends[0].to.empty();
    o.require(shape, "plan shape");
  });

  criterion("planner-optimality", 10, [](Outcome& o) {
    Planner planner;
    std::size_t checked = 0;
    for (const auto& fields : {std::vector<std::string>{"D"}, std::vector<std::string>{"A", "B"}}) {
      auto bfs = oracle::knowledgeBfs(fields, 6);
      for (const auto& e : oracle::allPatterns(fields, 5)) {
        auto it = bfs.find({{}, e});
        o.require(it != bfs.end(), "BFS never derives " + e.str());
        if (it == bfs.end()) continue;
        o.require(planner.planCost({{}, e}) == it->second, "cost differs for " + e.str());
        ++checked;
      }
    }
    o.note << checked << " chains ";
  });

  criterion("oracle-equivalence", 60, [&c](Outcome& o) {
    std::size_t runs = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      std::size_t n = sizeFor(seed);
      std::pair<const CheckedProgram*, GraphState> inputs[] = {
          {&c.sssp, prepared(ssspInput(seed, n), c.sssp)},
          {&c.sv, prepared(svInput(seed, n), c.sv)},
          {&c.lr, prepared(withRandomVals(seed, n), c.lr)},
      };
      for (auto& [cp, g] : inputs) {
        RefStats rs;
        GraphState expect = execProgram(cp->program, g, cp->fields, &rs);
        GraphState got;
        RunStats stats = runCompiled(*cp, g, &got);
        o.require(graphsIdentical(got, expect), "graphs differ at seed " + std::to_string(seed));
        o.require(stats.loopIterations == rs.iterationsPerLoop, "iteration counts differ");
        ++runs;
      }
    }
    o.note << runs << " runs, n<=1000 ";
  });

  criterion("algorithmic-correctness", 0, [&c](Outcome& o) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      std::size_t n = sizeFor(seed);
      GraphState g = prepared(ssspInput(seed, n), c.sssp), out;
      runCompiled(c.sssp, g, &out);
      auto dist = oracle::dijkstra(g);
      for (std::size_t v = 0; v < n; ++v) {
        const Value& d = out.column("D")[v];
        bool same = dist[v] ? d.isInt() && d.asInt() == *dist[v] : d.kind() == Value::Kind::Inf;
        o.require(same, "SSSP differs from Dijkstra at seed " + std::to_string(seed));
      }

      GraphState h = prepared(svInput(seed, n), c.sv);
      runCompiled(c.sv, h, &out);
      auto minima = oracle::componentMinima(h);
      for (std::size_t v = 0; v < n; ++v)
        o.require(out.column("D")[v].asInt() == minima[v], "S-V differs from union-find at seed " + std::to_string(seed));
    }
    for (std::size_t n : {1, 2, 10, 1000}) {
      GraphState g = prepared(withRandomVals(n, n), c.lr), out;
      runCompiled(c.lr, g, &out);
      auto sums = oracle::prefixSums(g);
      for (std::size_t v = 0; v < n; ++v)
        o.require(out.column("Sum")[v].asInt() == sums[v], "LR differs from prefix sums at n=" + std::to_string(n));
    }
    o.note << "50 SSSP, 50 S-V, LR n={1,2,10,1000} ";
  });

  criterion("logarithmic-convergence", 0, [&c](Outcome& o) {
    std::ostringstream sv, lr;
    std::size_t prevSv = 0, prevLr = 0;
    for (std::size_t e = 7; e <= 13; ++e) {
      std::size_t n = std::size_t(1) << e;
      std::size_t ks = runCompiled(c.sv, prepared(svInput(e, n), c.sv)).loopIterations.at(0);
      std::size_t kl = runCompiled(c.lr, prepared(randomChain(e, n), c.lr)).loopIterations.at(0);
      sv << (e == 7 ? "" : ",") << ks;
      lr << (e == 7 ? "" : ",") << kl;
      o.require(kl == e + 1, "LR iterations != log2 n + 1 at n=" + std::to_string(n));
      if (e > 7) {
        o.require(ks <= prevSv + 2, "S-V grew by more than 2 at n=" + std::to_string(n));
        o.require(kl == prevLr + 1, "LR did not grow by exactly 1 at n=" + std::to_string(n));
      }
      prevSv = ks;
      prevLr = kl;
    }
    o.note << "n=2^7..2^13 S-V=" << sv.str() << " LR=" << lr.str() << " ";
  });

  criterion("fusion-ratio", 0, [&c](Outcome& o) {
    const std::size_t n = 2000;
    GraphState g = prepared(randomGraph(1, n, 5 * n, GraphKind::Weighted), c.sssp);
    RunStats f = runCompiled(c.sssp, g, nullptr, {true, true});
    RunStats u = runCompiled(c.sssp, g, nullptr, {false, true});
    std::size_t k = f.loopIterations.at(0);
    double reduction = 1.0 - double(f.supersteps) / double(u.supersteps);
    o.require(u.loopIterations.at(0) == k, "layouts disagree on iterations");
    o.require(u.supersteps == 3 * k + 3, "unfused is not 3k+3");
    o.require(f.supersteps == k + 3, "fused is not k+3");
    o.require(reduction >= 0.60 && reduction <= 0.70, "SSSP reduction outside [60%, 70%]");
    char buf[96];
    std::snprintf(buf, sizeof buf, "SSSP k=%zu fused=%zu unfused=%zu reduction=%.2f%% ", k, f.supersteps,
                  u.supersteps, 100 * reduction);
    o.note << buf;

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      GraphState h = prepared(svInput(seed, 500), c.sv);
      RunStats sf = runCompiled(c.sv, h, nullptr, {true, true});
      RunStats su = runCompiled(c.sv, h, nullptr, {false, true});
      o.require(su.supersteps - sf.supersteps == sf.loopIterations.at(0), "S-V does not save 1 per iteration");
      if (seed == 1)
        o.note << "S-V k=" << sf.loopIterations.at(0) << " fused=" << sf.supersteps << " unfused=" << su.supersteps
               << " ";
    }
  });

  criterion("combiner-effect", 0, [&c](Outcome& o) {
    GraphState g = prepared(
        buildGraph(5, {{0, 1, 10}, {0, 2, 3}, {2, 1, 4}, {1, 3, 2}, {2, 3, 8}, {3, 4, 7}, {4, 0, 1}}, true, true),
        c.sssp);
    GraphState on, off;
    RunStats a = runCompiled(c.sssp, g, &on, {true, true});
    RunStats b = runCompiled(c.sssp, g, &off, {true, false});
    o.require(a.messagesCombined < a.messagesSent, "no messages combined");
    o.require(graphsIdentical(on, off), "SSSP distances differ");
    o.note << "5-vertex SSSP sent=" << a.messagesSent << " combined=" << a.messagesCombined << " ";

    std::size_t diffs = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      std::pair<const CheckedProgram*, GraphState> inputs[] = {
          {&c.sssp, prepared(ssspInput(seed, 300), c.sssp)},
          {&c.sv, prepared(svInput(seed, 300), c.sv)},
          {&c.lr, prepared(withRandomVals(seed, 300), c.lr)},
      };
      for (auto& [cp, h] : inputs) {
        runCompiled(*cp, h, &on, {true, true});
        runCompiled(*cp, h, &off, {true, false});
        diffs += diffGraphs(on, off).size();
      }
    }
    o.require(diffs == 0, "combiners change a corpus result");
    o.note << "corpus on/off diffs=" << diffs << " ";
  });

  criterion("message-independence", 0, [&c](Outcome& o) {
    std::pair<const CheckedProgram*, GraphState> inputs[] = {
        {&c.sssp, prepared(ssspInput(3, 400), c.sssp)},
        {&c.sv, prepared(svInput(3, 400), c.sv)},
        {&c.lr, prepared(withRandomVals(3, 400), c.lr)},
    };
    for (auto& [cp, g] : inputs) {
      STM m = compileProgram(*cp);
      GraphState clean = runSTM(m, g);
      RunOptions ro;
      std::mt19937_64 rng(17);
      for (int i = 0; i < 1000; ++i) {
        Message msg{VertexId(rng() % g.size()), int(rng() % m.slots.size()), VertexId(rng() % g.size()),
                    {Value::integer(std::int64_t(rng() % 1000)), Value::integer(std::int64_t(rng() % 1000))}};
        ro.initialMessages.push_back(std::move(msg));
      }
      o.require(graphsIdentical(runSTM(m, g, nullptr, ro), clean), "spurious messages changed a result");
    }
    o.note << "1000 messages x 3 programs ";
  });

  criterion("remote-write-order", 0, [&c](Outcome& o) {
    const Step& step = std::get<Step>(std::get<Iter>(c.sv.program.items[1]).body->items[0]);
    GraphState g = prepared(svInput(21, 500), c.sv);
    g = execStep(std::get<Step>(c.sv.program.items[0]), g, c.sv.fields);
    GraphState base = execStep(step, g, c.sv.fields);
    o.require(!graphsIdentical(base, g), "step made no remote writes");
    STM m = compileProgram(c.sv);
    GraphState compiledBase = runSTM(m, prepared(svInput(21, 500), c.sv));
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      RefOptions ref;
      ref.remoteOrderSeed = seed;
      o.require(graphsIdentical(execStep(step, g, c.sv.fields, nullptr, ref), base), "reference step differs");
      RunOptions ro;
      ro.remoteOrderSeed = seed;
      o.require(graphsIdentical(runSTM(m, prepared(svInput(21, 500), c.sv), nullptr, ro), compiledBase),
                "compiled run differs");
    }
    o.note << "20 permutations ";
  });

  criterion("round-trips", 0, [](Outcome& o) {
    for (const char* name : {"sssp", "sv", "lr"}) {
      std::string once = prettyPrint(parseSource(oracle::corpus(name)));
      o.require(prettyPrint(parseSource(once)) == once, std::string("printer not a fixpoint on ") + name);
    }
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      GraphState g = randomGraph(seed, 1 + seed % 40, (seed % 40) / 2, GraphKind(seed % 3));
      o.require(graphsIdentical(parseGraph(formatGraph(g)), g), "graph round trip at seed " + std::to_string(seed));
    }
    o.note << "3 programs, 100 graphs ";
  });

  std::printf("%d failure(s)\n", failures);
  return failures;
}
