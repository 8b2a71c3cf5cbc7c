// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <functional>
#include <random>

#include "oracles.hpp"
#include "palgol/compiler.hpp"
#include "palgol/error.hpp"
#include "palgol/refsem.hpp"
#include "palgol/runtime.hpp"

using namespace palgol;

namespace {

Message msg(VertexId dest, int slot, VertexId source, std::int64_t x) {
  return {dest, slot, source, {Value::integer(x)}};
}

std::vector<std::int64_t> payloads(const std::vector<Message>& box) {
  std::vector<std::int64_t> out;
  for (const auto& m : box) out.push_back(m.payload[0].asInt());
  return out;
}

struct Run {
  GraphState graph;
  RunStats stats;
};

Run compiled(const CheckedProgram& cp, const GraphState& g, CompileOptions co = {}, RunOptions ro = {}) {
  STM m = compileProgram(cp, co);
  ro.combiners = co.combiners;
  Run r;
  r.graph = runSTM(m, g, &r.stats, ro);
  return r;
}

GraphState dijkstraGraph() {
  return buildGraph(5, {{0, 1, 10}, {0, 2, 3}, {2, 1, 4}, {1, 3, 2}, {2, 3, 8}, {3, 4, 7}, {4, 0, 1}}, true, true);
}

// Compiled output equals refsem for every layout and combiner choice.
// Corpus programs keep generated inputs; random Pred cycles would diverge.
void checkEquivalent(const std::string& source, const std::function<GraphState(std::uint64_t)>& make, int seeds,
                     bool randomize = true) {
  auto cp = checkSource(source);
  for (int seed = 1; seed <= seeds; ++seed) {
    GraphState g = make(std::uint64_t(seed));
    prepareGraph(g, cp.fields);
    if (randomize) oracle::randomizeFields(g, cp.fields, std::uint64_t(seed) * 7919);
    RefStats rs;
    GraphState expect = execProgram(cp.program, g, cp.fields, &rs);
    for (bool fuse : {true, false})
      for (bool comb : {true, false}) {
        Run r = compiled(cp, g, {fuse, comb});
        CAPTURE(seed);
        CAPTURE(fuse);
        CAPTURE(comb);
        CHECK(graphsIdentical(r.graph, expect));
        CHECK(r.stats.loopIterations == rs.iterationsPerLoop);
        CHECK(r.stats.remoteWritesDiscarded == rs.remoteWritesDiscarded);
        CHECK(r.stats.messagesCombined <= r.stats.messagesSent);
      }
  }
}

GraphState undirected(std::uint64_t seed) { return randomGraph(seed, 5 + seed % 30, seed % 40, GraphKind::Undirected); }
GraphState weighted(std::uint64_t seed) { return randomGraph(seed, 5 + seed % 30, seed % 60, GraphKind::Weighted); }

}  // namespace

TEST_SUITE("runtime") {
  TEST_CASE("delivery folds combinable slots") {
    std::vector<Slot> slots{{Slot::Kind::Pushed, "a", 0, AccOp::Min, ""}, {Slot::Kind::Component, "b", 0, {}, ""}};
    std::vector<bool> stopped(2, false);

    Delivery d = deliverMessages({msg(1, 0, 0, 5), msg(1, 0, 1, 2), msg(1, 0, 1, 9)}, slots, stopped, true);
    REQUIRE(d.inbox[1].size() == 1);
    CHECK(d.inbox[1][0].payload[0].asInt() == 2);
    CHECK(d.delivered == 1);
    CHECK(d.inbox[0].empty());

    Delivery off = deliverMessages({msg(1, 0, 1, 9), msg(1, 0, 0, 5), msg(1, 0, 1, 2)}, slots, stopped, false);
    CHECK(payloads(off.inbox[1]) == std::vector<std::int64_t>{5, 9, 2});
    CHECK(off.delivered == 3);

    Delivery mixed = deliverMessages({msg(0, 1, 1, 4), msg(0, 0, 1, 3), msg(0, 1, 0, 8), msg(0, 0, 0, 6)}, slots,
                                     stopped, true);
    CHECK(payloads(mixed.inbox[0]) == std::vector<std::int64_t>{3, 8, 4});
    CHECK(mixed.delivered == 3);
  }

  TEST_CASE("delivery drops remote updates to stopped vertices") {
    std::vector<Slot> slots{{Slot::Kind::Remote, "ru", 0, AccOp::Sum, ""}};
    std::vector<bool> stopped{true, false};
    Delivery d = deliverMessages({msg(0, 0, 1, 1), msg(1, 0, 0, 2), msg(0, 0, 0, 3), msg(1, 0, 1, 4)}, slots, stopped,
                                 true);
    CHECK(d.discarded == 2);
    CHECK(d.inbox[0].empty());
    CHECK(payloads(d.inbox[1]) == std::vector<std::int64_t>{6});
  }

  TEST_CASE("fix vote") {
    GraphState g = buildGraph(3, {}, false, false);
    g.fields["X"] = {Value::integer(1), Value::integer(2), Value::integer(3)};
    std::map<std::string, std::vector<Value>> before{{"X", g.fields["X"]}};
    CHECK_FALSE(evaluateFixVote(before, g));
    g.column("X")[2] = Value::integer(4);
    CHECK(evaluateFixVote(before, g));
    g.stopped[2] = true;
    CHECK_FALSE(evaluateFixVote(before, g));
    g.column("X")[0] = Value::real(1.0);  // same number, different value
    CHECK(evaluateFixVote(before, g));
  }

  TEST_CASE("an empty machine takes one superstep") {
    STM m;
    m.states.push_back({StateKind::Main, {}, false, {}});
    GraphState g = randomGraph(3, 10, 12, GraphKind::Undirected);
    RunStats stats;
    GraphState out = runSTM(m, g, &stats);
    CHECK(graphsIdentical(out, g));
    CHECK(stats.supersteps == 1);
    CHECK(stats.messagesSent == 0);
  }

  TEST_CASE("SSSP on the 5-vertex digraph") {
    auto cp = checkSource(oracle::corpus("sssp"));
    GraphState g = dijkstraGraph();
    prepareGraph(g, cp.fields);
    Run on = compiled(cp, g), off = compiled(cp, g, {true, false});
    CHECK(graphsIdentical(on.graph, execProgram(cp.program, g, cp.fields)));
    CHECK(graphsIdentical(on.graph, off.graph));
    // Vertices 1 and 3 have in-degree 2, so combining saves messages.
    CHECK(on.stats.messagesCombined < on.stats.messagesSent);
    CHECK(off.stats.messagesCombined == off.stats.messagesSent);
    CHECK(on.stats.messagesSent == off.stats.messagesSent);
  }

  TEST_CASE("LR on an 8-chain needs log2 8 + 1 iterations") {
    auto cp = checkSource(oracle::corpus("lr"));
    GraphState g = randomChain(4, 8);
    prepareGraph(g, cp.fields);
    Run r = compiled(cp, g);
    CHECK(r.stats.loopIterations == std::vector<std::size_t>{4});
  }

  TEST_CASE("runs are deterministic") {
    for (const char* name : {"sssp", "sv"}) {
      auto cp = checkSource(oracle::corpus(name));
      GraphState g = randomGraph(11, 300, 900, std::string(name) == "sv" ? GraphKind::Undirected : GraphKind::Weighted);
      prepareGraph(g, cp.fields);
      Run a = compiled(cp, g), b = compiled(cp, g);
      CHECK(graphsIdentical(a.graph, b.graph));
      CHECK(a.stats.str() == b.stats.str());
    }
  }

  TEST_CASE("messages left in the first inbox are ignored") {
    auto cp = checkSource(oracle::corpus("sv"));
    GraphState g = randomGraph(5, 40, 60, GraphKind::Undirected);
    prepareGraph(g, cp.fields);
    STM m = compileProgram(cp);
    GraphState clean = runSTM(m, g);
    RunOptions ro;
    std::mt19937_64 rng(99);
    for (int i = 0; i < 1000; ++i)
      ro.initialMessages.push_back(msg(VertexId(rng() % 40), int(rng() % m.slots.size()), VertexId(rng() % 40),
                                       std::int64_t(rng() % 40)));
    CHECK(graphsIdentical(runSTM(m, g, nullptr, ro), clean));
  }

  TEST_CASE("superstep accounting") {
    auto cp = checkSource(oracle::corpus("sssp"));
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      GraphState g = randomGraph(seed, 50 * seed, 150 * seed, GraphKind::Weighted);
      prepareGraph(g, cp.fields);
      Run f = compiled(cp, g), u = compiled(cp, g, {false, true});
      std::size_t k = f.stats.loopIterations.at(0);
      CAPTURE(seed);
      CHECK(u.stats.loopIterations.at(0) == k);
      CHECK(f.stats.supersteps == k + 3);
      CHECK(u.stats.supersteps == 3 * k + 3);
    }
  }

  TEST_CASE("runtime errors") {
    auto chase = checkSource("for u in V\n  X[u] := Q[P[u]]\nend\n");
    GraphState h = buildGraph(2, {}, false, false);
    prepareGraph(h, chase.fields);
    h.column("P")[1] = Value::integer(7);
    CHECK_THROWS_WITH_AS(runSTM(compileProgram(chase), h), doctest::Contains("vertex 7"), RuntimeError);

    auto grow = checkSource("do\n  for u in V\n    X[u] += 1\n  end\nuntil fix[X]\n");
    GraphState g = buildGraph(2, {}, false, false);
    prepareGraph(g, grow.fields);
    RunOptions ro;
    ro.superstepCap = 10;
    CHECK_THROWS_AS(runSTM(compileProgram(grow), g, nullptr, ro), DivergenceError);
  }

  TEST_CASE("remote-update order does not matter") {
    auto cp = checkSource(oracle::corpus("sv"));
    GraphState g = randomGraph(8, 200, 300, GraphKind::Undirected);
    prepareGraph(g, cp.fields);
    STM m = compileProgram(cp);
    GraphState base = runSTM(m, g);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      RunOptions ro;
      ro.remoteOrderSeed = seed;
      CHECK(graphsIdentical(runSTM(m, g, nullptr, ro), base));
    }
  }

  TEST_CASE("corpus programs match the reference semantics") {
    checkEquivalent(oracle::corpus("sssp"), weighted, 25, false);
    checkEquivalent(oracle::corpus("sv"), undirected, 25, false);
    checkEquivalent(oracle::corpus("lr"), [](std::uint64_t s) { return randomChain(s, 1 + s * 3); }, 25, false);
  }

  TEST_CASE("more programs match the reference semantics") {
    SUBCASE("deep chains") {
      checkEquivalent("for u in V\n  X[u] := F[D[D[D[D[D[u]]]]]] + F[E[D[E[u]]]]\nend\n", undirected, 15);
    }
    SUBCASE("receiver-dependent comprehensions") {
      checkEquivalent("for u in V\n  X[u] := minimum[D[e.ref] + D[u] * e.val | e <- Nbr[u], D[e.ref] > D[u]]\n"
                      "  Y[u] := sum[1 | e <- Nbr[u], D[e.ref] > 3]\nend\n",
                      undirected, 15);
    }
    SUBCASE("directed edge lists") {
      checkEquivalent("for u in V\n  X[u] := sum[D[e.ref] | e <- In[u]]\n"
                      "  Y[u] := maximum[D[e.ref] + e.val | e <- Out[u]]\nend\n",
                      weighted, 15);
    }
    SUBCASE("nested loops") {
      checkEquivalent("for u in V\n  D[u] := (Id[u] == 0 ? 0 : inf)\nend\ndo\n  do\n    for u in V\n"
                      "      let m = minimum[D[e.ref] + e.val | e <- In[u]]\n      if (m < D[u])\n        D[u] := m\n"
                      "    end\n  until fix[D]\n  for u in V\n    Y[u] := maximum[D[e.ref] | e <- Out[u]]\n"
                      "    if (Y[u] < D[u])\n      D[u] := Y[u]\n  end\nuntil fix[Y]\n",
                      weighted, 10);
    }
    SUBCASE("stops and remote writes through chains") {
      checkEquivalent("stop u where (W[u] > 5)\nfor u in V\n  remote X[D[u]] += Y[D[D[u]]]\n"
                      "  remote Z[D[u]] >?= Y[u]\nend\n",
                      undirected, 15);
    }
  }
}
