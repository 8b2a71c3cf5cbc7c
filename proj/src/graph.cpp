// SPDX-License-Identifier: Apache-2.0

#include "palgol/graph.hpp"

#include <algorithm>
#include <set>

#include "palgol/sema.hpp"

namespace palgol {

std::size_t GraphState::edgeCount() const { return edgesOf(*this).size(); }

const std::vector<Value>& GraphState::column(const std::string& field) const {
  auto it = fields.find(field);
  if (it == fields.end()) throw RuntimeError("graph has no field " + field);
  return it->second;
}

std::vector<Value>& GraphState::column(const std::string& field) {
  auto it = fields.find(field);
  if (it == fields.end()) throw RuntimeError("graph has no field " + field);
  return it->second;
}

namespace {

using Adj = std::vector<std::vector<std::pair<VertexId, std::int64_t>>>;

std::vector<Value> toColumn(Adj& adj) {
  std::vector<Value> col;
  col.reserve(adj.size());
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    std::vector<Value> items;
    items.reserve(list.size());
    for (auto [ref, w] : list) items.push_back(Value::refVal(Value::integer(ref), Value::integer(w)));
    col.push_back(Value::list(std::move(items)));
  }
  return col;
}

}  // namespace

GraphState buildGraph(std::size_t n, const std::vector<Edge>& edges, bool directed, bool weighted) {
  GraphState g;
  g.directed = directed;
  g.weighted = weighted;
  g.stopped.assign(n, false);
  auto& id = g.fields["Id"];
  for (std::size_t v = 0; v < n; ++v) id.push_back(Value::integer(VertexId(v)));

  Adj out(n), in(n), nbr(n);
  std::set<std::pair<VertexId, VertexId>> seen;
  for (const Edge& e : edges) {
    if (!g.hasVertex(e.src) || !g.hasVertex(e.dst))
      throw GraphError("edge " + std::to_string(e.src) + " -> " + std::to_string(e.dst) + " has an id out of range");
    std::int64_t w = weighted ? e.weight : 1;
    if (directed) {
      out[e.src].push_back({e.dst, w});
      in[e.dst].push_back({e.src, w});
      continue;
    }
    auto key = std::minmax(e.src, e.dst);
    if (!seen.insert(key).second)
      throw GraphError("duplicate undirected edge " + std::to_string(key.first) + " -- " + std::to_string(key.second));
    nbr[e.src].push_back({e.dst, w});
    if (e.src != e.dst) nbr[e.dst].push_back({e.src, w});
  }
  if (directed) {
    g.fields["Out"] = toColumn(out);
    g.fields["In"] = toColumn(in);
    g.fields["Nbr"] = toColumn(nbr);
  } else {
    g.fields["Nbr"] = toColumn(nbr);
    g.fields["In"] = g.fields["Nbr"];
    g.fields["Out"] = g.fields["Nbr"];
  }
  return g;
}

std::vector<Edge> edgesOf(const GraphState& g) {
  std::vector<Edge> edges;
  const auto& col = g.column(g.directed ? "Out" : "Nbr");
  for (std::size_t v = 0; v < col.size(); ++v) {
    for (const Value& e : col[v].items()) {
      VertexId ref = e.items()[0].asVertex();
      if (!g.directed && ref < VertexId(v)) continue;
      edges.push_back({VertexId(v), ref, e.items()[1].asInt()});
    }
  }
  return edges;
}

void prepareGraph(GraphState& g, const FieldTable& types) {
  for (const auto& [name, info] : types.all()) {
    auto it = g.fields.find(name);
    if (it == g.fields.end()) {
      std::vector<Value> col;
      col.reserve(g.size());
      for (std::size_t v = 0; v < g.size(); ++v) col.push_back(defaultValue(info.type, VertexId(v)));
      g.fields.emplace(name, std::move(col));
    } else if (info.type.base == ValueType::Base::Float) {
      for (Value& x : it->second)
        if (x.isInt()) x = Value::real(double(x.asInt()));
    }
  }
}

bool graphsIdentical(const GraphState& a, const GraphState& b) {
  if (a.size() != b.size() || a.stopped != b.stopped || a.fields.size() != b.fields.size()) return false;
  for (const auto& [name, col] : a.fields) {
    auto it = b.fields.find(name);
    if (it == b.fields.end()) return false;
    for (std::size_t v = 0; v < col.size(); ++v)
      if (!identical(col[v], it->second[v])) return false;
  }
  return true;
}

std::vector<std::string> diffGraphs(const GraphState& a, const GraphState& b, std::size_t limit) {
  std::vector<std::string> out;
  auto add = [&](std::string s) {
    if (out.size() < limit) out.push_back(std::move(s));
  };
  if (a.size() != b.size()) {
    add("vertex count " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    return out;
  }
  std::set<std::string> names;
  for (const auto& [n, _] : a.fields) names.insert(n);
  for (const auto& [n, _] : b.fields) names.insert(n);
  for (const auto& name : names) {
    auto ia = a.fields.find(name), ib = b.fields.find(name);
    if (ia == a.fields.end() || ib == b.fields.end()) {
      add("field " + name + " missing on one side");
      continue;
    }
    for (std::size_t v = 0; v < a.size(); ++v)
      if (!identical(ia->second[v], ib->second[v]))
        add(name + "[" + std::to_string(v) + "]: " + ia->second[v].str() + " vs " + ib->second[v].str());
  }
  for (std::size_t v = 0; v < a.size(); ++v)
    if (a.stopped[v] != b.stopped[v]) add("stopped[" + std::to_string(v) + "] differs");
  return out;
}

}  // namespace palgol
