// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "oracles.hpp"
#include "palgol/refsem.hpp"

using namespace palgol;

namespace {

std::size_t listSize(const GraphState& g, const char* list, std::size_t v) { return g.column(list)[v].items().size(); }

bool hasEdge(const GraphState& g, const char* list, std::size_t v, VertexId to, std::int64_t w) {
  for (const auto& e : g.column(list)[v].items())
    if (e.items()[0].asInt() == to && e.items()[1].asInt() == w) return true;
  return false;
}

// Nbr is symmetric (undirected) or every Out edge has its In twin (directed).
void checkConsistent(const GraphState& g) {
  for (std::size_t v = 0; v < g.size(); ++v) {
    const char* from = g.directed ? "Out" : "Nbr";
    const char* back = g.directed ? "In" : "Nbr";
    for (const auto& e : g.column(from)[v].items()) {
      auto w = std::size_t(e.items()[0].asInt());
      CHECK(hasEdge(g, back, w, VertexId(v), e.items()[1].asInt()));
    }
    if (g.directed) CHECK(listSize(g, "Nbr", v) == 0);
  }
}

}  // namespace

TEST_SUITE("graphio") {
  TEST_CASE("triangle") {
    GraphState g = parseGraph("palgol-graph v1 undirected unweighted 3 3\nv 0\nv 1\nv 2\ne 0 1\ne 1 2\ne 0 2\n");
    for (std::size_t v = 0; v < 3; ++v) CHECK(listSize(g, "Nbr", v) == 2);
    checkConsistent(g);
  }

  TEST_CASE("single isolated vertex") {
    GraphState g = parseGraph("palgol-graph v1 undirected unweighted 1 0\nv 0\n");
    CHECK(g.size() == 1);
    CHECK(listSize(g, "Nbr", 0) == 0);
    CHECK(g.column("Id")[0].asInt() == 0);
  }

  TEST_CASE("directed 2-cycle") {
    GraphState g = parseGraph("palgol-graph v1 directed unweighted 2 2\nv 0\nv 1\ne 0 1\ne 1 0\n");
    for (std::size_t v = 0; v < 2; ++v) {
      CHECK(listSize(g, "Out", v) == 1);
      CHECK(listSize(g, "In", v) == 1);
    }
    checkConsistent(g);
  }

  TEST_CASE("malformed files") {
    CHECK_THROWS_AS(parseGraph("palgol-graph v1 undirected unweighted 2 2\nv 0\nv 1\ne 0 1\ne 1 0\n"), GraphError);
    CHECK_THROWS_AS(parseGraph("palgol-graph v1 undirected unweighted 2 1\nv 0\nv 1\ne 0 5\n"), GraphError);
    CHECK_THROWS_AS(parseGraph("palgol-graph v1 undirected unweighted 2 0\nv 0\nv 3\n"), GraphError);
    CHECK_THROWS_AS(parseGraph("palgol-graph v2 undirected unweighted 1 0\nv 0\n"), GraphError);
    CHECK_THROWS_AS(parseGraph("palgol-graph v1 undirected unweighted 1 0\nv 0 Id=3\n"), GraphError);
    CHECK_THROWS_AS(parseGraph(""), GraphError);
  }

  TEST_CASE("writer output is canonical") {
    GraphState g = buildGraph(3, {{2, 0, 1}, {0, 1, 5}, {1, 2, 7}}, true, true);
    g.fields["D"] = {Value::integer(0), Value::inf(), Value::real(2.5)};
    g.fields["A"] = {Value::boolean(true), Value::boolean(false), Value::boolean(false)};
    g.stopped[1] = true;
    CHECK(formatGraph(g) ==
          "palgol-graph v1 directed weighted 3 3\n"
          "v 0 A=true D=0\n"
          "v 1 A=false D=inf stopped=true\n"
          "v 2 A=false D=2.5\n"
          "e 0 1 5\n"
          "e 1 2 7\n"
          "e 2 0 1\n");
  }

  TEST_CASE("generators") {
    GraphState empty = randomGraph(1, 4, 0, GraphKind::Undirected);
    CHECK(empty.size() == 4);
    CHECK(empty.edgeCount() == 0);

    CHECK(graphsIdentical(randomGraph(9, 30, 60, GraphKind::Weighted), randomGraph(9, 30, 60, GraphKind::Weighted)));
    CHECK_FALSE(graphsIdentical(randomGraph(9, 30, 60, GraphKind::Directed), randomGraph(10, 30, 60, GraphKind::Directed)));

    GraphState complete = randomGraph(2, 6, 15, GraphKind::Undirected);
    for (std::size_t v = 0; v < 6; ++v) CHECK(listSize(complete, "Nbr", v) == 5);
    CHECK_THROWS_AS(randomGraph(1, 4, 7, GraphKind::Undirected), GraphError);

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      GraphState w = randomGraph(seed, 40, 120, GraphKind::Weighted);
      CHECK(w.edgeCount() == 120);
      checkConsistent(w);
      for (const auto& e : edgesOf(w)) {
        CHECK(e.weight >= 1);
        CHECK(e.weight <= 100);
        CHECK(e.src != e.dst);
      }
      checkConsistent(randomGraph(seed, 40, 100, GraphKind::Undirected));
    }
  }

  TEST_CASE("chains") {
    GraphState one = randomChain(4, 1);
    CHECK(one.column("Pred")[0].asInt() == 0);
    CHECK(one.column("Val")[0].asInt() == 0);
    CHECK(graphsIdentical(randomChain(6, 50), randomChain(6, 50)));

    GraphState c = randomChain(11, 200);
    std::size_t heads = 0;
    for (std::size_t v = 0; v < c.size(); ++v) {
      bool head = c.column("Pred")[v].asInt() == VertexId(v);
      heads += head;
      CHECK(c.column("Val")[v].asInt() == (head ? 0 : 1));
    }
    CHECK(heads == 1);
    auto ranks = oracle::prefixSums(c);
    std::sort(ranks.begin(), ranks.end());
    for (std::size_t i = 0; i < ranks.size(); ++i) CHECK(ranks[i] == std::int64_t(i));
  }

  TEST_CASE("save then load is the identity") {
    auto sssp = checkSource(oracle::corpus("sssp"));
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      GraphKind kind = GraphKind(seed % 3);
      GraphState g = randomGraph(seed, 1 + seed % 25, (seed % 25) / 2, kind);
      if (seed % 4 == 0) {
        prepareGraph(g, sssp.fields);
        g = execProgram(sssp.program, g, sssp.fields);
        g.stopped[0] = true;
      }
      CAPTURE(seed);
      CHECK(graphsIdentical(parseGraph(formatGraph(g)), g));
    }
    GraphState c = randomChain(3, 20);
    CHECK(graphsIdentical(parseGraph(formatGraph(c)), c));

    auto path = std::filesystem::temp_directory_path() / "palgol-roundtrip.graph";
    GraphState g = randomGraph(77, 50, 80, GraphKind::Weighted);
    saveGraph(g, path.string());
    CHECK(graphsIdentical(loadGraph(path.string()), g));
    std::filesystem::remove(path);
  }

  TEST_CASE("floats round-trip bit-exactly") {
    GraphState g = buildGraph(3, {}, false, false);
    g.fields["F"] = {Value::real(0.1), Value::real(1.0 / 3.0), Value::real(-2.0)};
    GraphState back = parseGraph(formatGraph(g));
    for (std::size_t v = 0; v < 3; ++v) CHECK(identical(back.column("F")[v], g.column("F")[v]));
  }

  TEST_CASE("prepareGraph fills type defaults") {
    auto cp = checkSource(oracle::corpus("sv"));
    GraphState g = randomGraph(1, 5, 3, GraphKind::Undirected);
    prepareGraph(g, cp.fields);
    for (std::size_t v = 0; v < 5; ++v) CHECK(g.column("D")[v].asInt() == VertexId(v));
  }
}
