// SPDX-License-Identifier: Apache-2.0
//
// In-memory graph state shared by both execution engines, plus the text
// file format and seeded generators.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "palgol/value.hpp"

namespace palgol {

class FieldTable;

/// Vertices 0..n-1 with one column of values per field. The edge lists
/// Nbr, In and Out are ordinary (immutable) fields holding lists of
/// {ref, weight} pairs sorted by (ref, weight). Undirected graphs store
/// each edge in Nbr, In and Out of both endpoints; directed graphs fill
/// Out at the source and In at the target and leave Nbr empty.
struct GraphState {
  bool directed = false;
  bool weighted = false;
  std::map<std::string, std::vector<Value>> fields;
  std::vector<bool> stopped;

  std::size_t size() const { return stopped.size(); }
  bool hasVertex(VertexId v) const { return v >= 0 && std::uint64_t(v) < size(); }
  std::size_t edgeCount() const;

  const std::vector<Value>& column(const std::string& field) const;
  std::vector<Value>& column(const std::string& field);
  bool hasField(const std::string& field) const { return fields.count(field) != 0; }
};

/// Builds a graph with Id and the three edge lists from an edge list.
/// Undirected duplicate edges are rejected; self-loops appear once.
struct Edge {
  VertexId src = 0;
  VertexId dst = 0;
  std::int64_t weight = 1;
};
GraphState buildGraph(std::size_t n, const std::vector<Edge>& edges, bool directed, bool weighted);

/// The edges of `g`, each undirected edge once with src <= dst, sorted.
std::vector<Edge> edgesOf(const GraphState& g);

/// Adds every field of `types` missing from `g` with its type default and
/// widens int values stored in float-typed fields.
void prepareGraph(GraphState& g, const FieldTable& types);

bool graphsIdentical(const GraphState& a, const GraphState& b);
/// Human-readable field-by-field differences; empty iff identical.
std::vector<std::string> diffGraphs(const GraphState& a, const GraphState& b, std::size_t limit = 20);

// ---- file format ----

Value parseValue(std::string_view text);
GraphState parseGraph(std::string_view text);
std::string formatGraph(const GraphState& g);
GraphState loadGraph(const std::string& path);
void saveGraph(const GraphState& g, const std::string& path);

// ---- generators ----

enum class GraphKind { Undirected, Directed, Weighted };

/// Uniform simple graph with exactly m edges. Weighted graphs are
/// directed with integer weights uniform in [1, 100].
GraphState randomGraph(std::uint64_t seed, std::size_t n, std::size_t m, GraphKind kind);

/// A linked list through Pred with a self-linked head whose Val is 0;
/// every other element has Val = 1. Element order is shuffled by seed.
GraphState randomChain(std::uint64_t seed, std::size_t n);

}  // namespace palgol
