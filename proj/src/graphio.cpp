// SPDX-License-Identifier: Apache-2.0
//
// Text graph format:
//   palgol-graph v1 <directed|undirected> <weighted|unweighted> n m
//   v <id> [Field=value]... [stopped=true]
//   e <src> <dst> [weight]

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "palgol/graph.hpp"

namespace palgol {

namespace {

bool isPredefined(const std::string& f) { return f == "Id" || f == "Nbr" || f == "In" || f == "Out"; }

class ValueReader {
 public:
  explicit ValueReader(std::string_view s) : s_(s) {}

  Value read() {
    Value v = value();
    if (pos_ != s_.size()) fail();
    return v;
  }

 private:
  [[noreturn]] void fail() { throw GraphError("malformed value '" + std::string(s_) + "'"); }

  void expect(char c) {
    if (pos_ >= s_.size() || s_[pos_] != c) fail();
    ++pos_;
  }

  std::vector<Value> sequence(char close) {
    std::vector<Value> items;
    if (pos_ < s_.size() && s_[pos_] == close) {
      ++pos_;
      return items;
    }
    for (;;) {
      items.push_back(value());
      if (pos_ < s_.size() && s_[pos_] == ',') {
        ++pos_;
        continue;
      }
      expect(close);
      return items;
    }
  }

  Value value() {
    if (pos_ >= s_.size()) fail();
    char c = s_[pos_];
    if (c == '(' || c == '{') {
      ++pos_;
      auto items = sequence(c == '(' ? ')' : '}');
      if (items.size() != 2) fail();
      return c == '(' ? Value::pair(items[0], items[1]) : Value::refVal(items[0], items[1]);
    }
    if (c == '[') {
      ++pos_;
      return Value::list(sequence(']'));
    }
    std::size_t end = s_.find_first_of(",)}]", pos_);
    if (end == std::string_view::npos) end = s_.size();
    std::string_view tok = s_.substr(pos_, end - pos_);
    pos_ = end;
    if (tok == "true") return Value::boolean(true);
    if (tok == "false") return Value::boolean(false);
    if (tok == "inf") return Value::inf();
    if (tok == "-inf") return Value::negInf();
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (tok.find_first_of(".eE") == std::string_view::npos) {
      std::int64_t i = 0;
      auto r = std::from_chars(first, last, i);
      if (r.ec != std::errc() || r.ptr != last) fail();
      return Value::integer(i);
    }
    double d = 0;
    auto r = std::from_chars(first, last, d);
    if (r.ec != std::errc() || r.ptr != last) fail();
    return Value::real(d);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::int64_t parseCount(const std::string& tok, const std::string& what, int line) {
  std::int64_t v = 0;
  auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (r.ec != std::errc() || r.ptr != tok.data() + tok.size() || v < 0)
    throw GraphError("line " + std::to_string(line) + ": bad " + what + " '" + tok + "'");
  return v;
}

}  // namespace

Value parseValue(std::string_view text) { return ValueReader(text).read(); }

GraphState parseGraph(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineNo = 0;
  auto nextLine = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineNo;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos && line[line.find_first_not_of(" \t")] != '#') return true;
    }
    return false;
  };
  auto words = [&]() {
    std::istringstream ls(line);
    std::vector<std::string> w;
    for (std::string s; ls >> s;) w.push_back(s);
    return w;
  };
  auto err = [&](const std::string& msg) { return GraphError("line " + std::to_string(lineNo) + ": " + msg); };

  if (!nextLine()) throw GraphError("empty graph file");
  auto h = words();
  if (h.size() != 6 || h[0] != "palgol-graph" || h[1] != "v1" || (h[2] != "directed" && h[2] != "undirected") ||
      (h[3] != "weighted" && h[3] != "unweighted"))
    throw err("expected header 'palgol-graph v1 <directed|undirected> <weighted|unweighted> n m'");
  bool directed = h[2] == "directed", weighted = h[3] == "weighted";
  auto n = std::size_t(parseCount(h[4], "vertex count", lineNo));
  auto m = std::size_t(parseCount(h[5], "edge count", lineNo));

  std::vector<std::map<std::string, Value>> attrs(n);
  std::vector<bool> stopped(n, false), seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (!nextLine()) throw err("expected " + std::to_string(n) + " vertex lines");
    auto w = words();
    if (w.size() < 2 || w[0] != "v") throw err("expected vertex line 'v <id> ...'");
    auto id = std::size_t(parseCount(w[1], "vertex id", lineNo));
    if (id >= n) throw err("vertex id " + w[1] + " out of range");
    if (seen[id]) throw err("duplicate vertex " + w[1]);
    seen[id] = true;
    for (std::size_t k = 2; k < w.size(); ++k) {
      auto eq = w[k].find('=');
      if (eq == std::string::npos || eq == 0) throw err("expected field=value, found '" + w[k] + "'");
      std::string key = w[k].substr(0, eq);
      Value v;
      try {
        v = parseValue(std::string_view(w[k]).substr(eq + 1));
      } catch (const GraphError& e) {
        throw err(e.what());
      }
      if (key == "stopped") {
        if (!v.isBool()) throw err("stopped must be true or false");
        stopped[id] = v.asBool();
      } else if (isPredefined(key)) {
        throw err("field " + key + " is derived from the edges and cannot be set");
      } else {
        attrs[id][key] = v;
      }
    }
  }

  std::vector<Edge> edges;
  for (std::size_t i = 0; i < m; ++i) {
    if (!nextLine()) throw err("expected " + std::to_string(m) + " edge lines");
    auto w = words();
    if (w.size() < 3 || w.size() > 4 || w[0] != "e") throw err("expected edge line 'e <src> <dst> [weight]'");
    Edge e{parseCount(w[1], "source", lineNo), parseCount(w[2], "target", lineNo), 1};
    if (w.size() == 4) {
      if (!weighted) throw err("weight given in an unweighted graph");
      auto r = std::from_chars(w[3].data(), w[3].data() + w[3].size(), e.weight);
      if (r.ec != std::errc() || r.ptr != w[3].data() + w[3].size()) throw err("bad weight '" + w[3] + "'");
    } else if (weighted) {
      throw err("missing weight in a weighted graph");
    }
    if (std::size_t(e.src) >= n || std::size_t(e.dst) >= n) throw err("edge endpoint out of range");
    edges.push_back(e);
  }
  if (nextLine()) throw err("trailing content after " + std::to_string(m) + " edges");

  GraphState g = buildGraph(n, edges, directed, weighted);
  g.stopped = stopped;
  // Every vertex carries every field; a field missing on some vertex
  // gets that field's value type default there.
  std::set<std::string> names;
  for (const auto& a : attrs)
    for (const auto& [k, _] : a) names.insert(k);
  for (const auto& name : names) {
    std::vector<Value> col(n);
    const Value* sample = nullptr;
    for (std::size_t v = 0; v < n && !sample; ++v)
      if (auto it = attrs[v].find(name); it != attrs[v].end()) sample = &it->second;
    for (std::size_t v = 0; v < n; ++v) {
      auto it = attrs[v].find(name);
      if (it != attrs[v].end()) col[v] = it->second;
      else if (sample->isFloat()) col[v] = Value::real(0.0);
      else if (sample->isBool()) col[v] = Value::boolean(false);
      else col[v] = Value::integer(0);
    }
    g.fields[name] = std::move(col);
  }
  return g;
}

std::string formatGraph(const GraphState& g) {
  std::vector<Edge> edges = edgesOf(g);
  std::ostringstream os;
  os << "palgol-graph v1 " << (g.directed ? "directed" : "undirected") << ' '
     << (g.weighted ? "weighted" : "unweighted") << ' ' << g.size() << ' ' << edges.size() << '\n';
  for (std::size_t v = 0; v < g.size(); ++v) {
    os << "v " << v;
    for (const auto& [name, col] : g.fields)
      if (!isPredefined(name)) os << ' ' << name << '=' << col[v].str();
    if (g.stopped[v]) os << " stopped=true";
    os << '\n';
  }
  for (const Edge& e : edges) {
    os << "e " << e.src << ' ' << e.dst;
    if (g.weighted) os << ' ' << e.weight;
    os << '\n';
  }
  return os.str();
}

GraphState loadGraph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open graph file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parseGraph(ss.str());
}

void saveGraph(const GraphState& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw GraphError("cannot write graph file " + path);
  out << formatGraph(g);
}

// ---- generators ----

namespace {

// Unbiased-enough bounded draw that does not depend on the standard
// library's distribution implementations.
std::uint64_t below(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

template <typename T>
void shuffle(std::vector<T>& xs, std::mt19937_64& rng) {
  for (std::size_t i = xs.size(); i > 1; --i) std::swap(xs[i - 1], xs[below(rng, i)]);
}

}  // namespace

GraphState randomGraph(std::uint64_t seed, std::size_t n, std::size_t m, GraphKind kind) {
  bool directed = kind != GraphKind::Undirected;
  bool weighted = kind == GraphKind::Weighted;
  std::uint64_t pairs = n < 2 ? 0 : std::uint64_t(n) * (n - 1) / (directed ? 1 : 2);
  if (m > pairs)
    throw GraphError("cannot place " + std::to_string(m) + " edges on " + std::to_string(n) + " vertices");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<VertexId, VertexId>> chosen;
  if (m * 2 > pairs) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = directed ? 0 : a + 1; b < n; ++b)
        if (a != b) chosen.push_back({VertexId(a), VertexId(b)});
    shuffle(chosen, rng);
    chosen.resize(m);
  } else {
    std::set<std::pair<VertexId, VertexId>> used;
    while (chosen.size() < m) {
      auto a = VertexId(below(rng, n)), b = VertexId(below(rng, n));
      if (a == b) continue;
      if (!directed && a > b) std::swap(a, b);
      if (used.insert({a, b}).second) chosen.push_back({a, b});
    }
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<Edge> edges;
  edges.reserve(m);
  for (auto [a, b] : chosen) edges.push_back({a, b, weighted ? std::int64_t(1 + below(rng, 100)) : 1});
  return buildGraph(n, edges, directed, weighted);
}

GraphState randomChain(std::uint64_t seed, std::size_t n) {
  if (n == 0) throw GraphError("a chain needs at least one element");
  std::mt19937_64 rng(seed);
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);
  GraphState g = buildGraph(n, {}, true, false);
  std::vector<Value> pred(n), val(n);
  pred[order[0]] = Value::integer(order[0]);
  val[order[0]] = Value::integer(0);
  for (std::size_t i = 1; i < n; ++i) {
    pred[order[i]] = Value::integer(order[i - 1]);
    val[order[i]] = Value::integer(1);
  }
  g.fields["Pred"] = std::move(pred);
  g.fields["Val"] = std::move(val);
  return g;
}

}  // namespace palgol
