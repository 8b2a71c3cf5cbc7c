// SPDX-License-Identifier: Apache-2.0
//
// palgol: compile, run and cross-check vertex-centric programs.
//
// Exit codes: 0 success, 1 usage/compile/input error, 2 runtime error,
// 3 engines disagree.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "palgol/compiler.hpp"
#include "palgol/printer.hpp"
#include "palgol/refsem.hpp"
#include "palgol/runtime.hpp"

namespace {

using namespace palgol;

struct Config {
  std::string program;
  std::string graph;
  std::string gen;
  std::uint64_t seed = 1;
  std::string engine = "compiled";
  bool noFuse = false;
  bool noCombiners = false;
  std::string emit = "stm";
  std::size_t maxSupersteps = 1000000;
  std::string statsOut;
  std::string out;
  bool variants = false;
};

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CheckedProgram load(const Config& c) { return checkSource(readFile(c.program)); }

// "random:N:M[:undirected|directed|weighted]" or "chain:N".
GraphState generate(const std::string& spec, std::uint64_t seed) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  auto num = [&](std::size_t i) -> std::size_t {
    if (i >= parts.size()) throw std::invalid_argument("generator spec '" + spec + "' is too short");
    return std::stoull(parts[i]);
  };
  if (parts.at(0) == "chain") return randomChain(seed, num(1));
  if (parts.at(0) == "random") {
    GraphKind kind = GraphKind::Undirected;
    if (parts.size() > 3) {
      if (parts[3] == "directed") kind = GraphKind::Directed;
      else if (parts[3] == "weighted") kind = GraphKind::Weighted;
      else if (parts[3] != "undirected") throw std::invalid_argument("unknown graph kind '" + parts[3] + "'");
    }
    return randomGraph(seed, num(1), num(2), kind);
  }
  throw std::invalid_argument("unknown generator '" + parts[0] + "'");
}

GraphState inputGraph(const Config& c, const FieldTable& fields) {
  if (c.graph.empty() == c.gen.empty()) throw std::invalid_argument("give exactly one of --graph and --gen");
  GraphState g = c.graph.empty() ? generate(c.gen, c.seed) : loadGraph(c.graph);
  prepareGraph(g, fields);
  return g;
}

nlohmann::json statsJson(const RunStats& s) {
  return {{"supersteps", s.supersteps},
          {"messages_sent", s.messagesSent},
          {"messages_combined", s.messagesCombined},
          {"loop_iterations", s.loopIterations},
          {"remote_writes_discarded", s.remoteWritesDiscarded}};
}

nlohmann::json refStatsJson(const RefStats& s) {
  return {{"loop_iterations", s.iterationsPerLoop}, {"remote_writes_discarded", s.remoteWritesDiscarded}};
}

void writeStats(const Config& c, const nlohmann::json& report) {
  if (c.statsOut.empty()) return;
  std::ofstream out(c.statsOut);
  out << report.dump(2) << "\n";
}

std::string planText(const STM& stm) {
  std::ostringstream os;
  for (std::size_t i = 0; i < stm.steps.size(); ++i) {
    const CommPlan& plan = stm.steps[i].plan;
    if (plan.size() == 0) continue;
    os << "step" << i << ": " << plan.size() << " round" << (plan.size() == 1 ? "" : "s") << "\n";
    os << plan.derivation() << plan.str();
  }
  return os.str();
}

int cmdCompile(const Config& c) {
  CheckedProgram cp = load(c);
  if (c.emit == "ast") {
    std::cout << dumpTree(cp.program);
    return 0;
  }
  STM stm = compileProgram(cp, {!c.noFuse, !c.noCombiners});
  std::cout << (c.emit == "plan" ? planText(stm) : stm.str());
  return 0;
}

int cmdPlan(const Config& c) {
  CheckedProgram cp = load(c);
  std::cout << planText(compileProgram(cp));
  return 0;
}

RunStats runCompiled(const CheckedProgram& cp, const GraphState& g, bool fuse, bool combiners, std::size_t cap,
                     GraphState* out) {
  STM stm = compileProgram(cp, {fuse, combiners});
  RunOptions opt;
  opt.superstepCap = cap;
  opt.combiners = combiners;
  RunStats stats;
  GraphState result = runSTM(stm, g, &stats, opt);
  if (out) *out = std::move(result);
  return stats;
}

void writeGraph(const Config& c, const GraphState& g) {
  if (c.out.empty()) std::cout << formatGraph(g);
  else saveGraph(g, c.out);
}

int cmdRun(const Config& c) {
  CheckedProgram cp = load(c);
  GraphState g = inputGraph(c, cp.fields);
  GraphState result;
  if (c.engine == "reference") {
    RefStats rs;
    RefOptions opt;
    opt.iterationCap = c.maxSupersteps;
    result = execProgram(cp.program, g, cp.fields, &rs, opt);
    std::ostringstream loops;
    for (std::size_t i = 0; i < rs.iterationsPerLoop.size(); ++i) loops << (i ? "," : "") << rs.iterationsPerLoop[i];
    std::cerr << "loop_iterations=" << loops.str() << "\nremote_writes_discarded=" << rs.remoteWritesDiscarded
              << "\n";
    writeStats(c, {{"engine", "reference"}, {"stats", refStatsJson(rs)}});
  } else {
    RunStats st = runCompiled(cp, g, !c.noFuse, !c.noCombiners, c.maxSupersteps, &result);
    std::cerr << st.str();
    writeStats(c, {{"engine", "compiled"}, {"stats", statsJson(st)}});
  }
  writeGraph(c, result);
  return 0;
}

int cmdCompare(const Config& c) {
  CheckedProgram cp = load(c);
  GraphState g = inputGraph(c, cp.fields);
  RefStats rs;
  GraphState ref = execProgram(cp.program, g, cp.fields, &rs);
  GraphState compiled;
  RunStats st = runCompiled(cp, g, !c.noFuse, !c.noCombiners, c.maxSupersteps, &compiled);
  auto diff = diffGraphs(ref, compiled);

  nlohmann::json report{{"identical", diff.empty()},
                        {"reference", refStatsJson(rs)},
                        {"compiled", statsJson(st)},
                        {"differences", diff}};
  std::cout << "identical=" << (diff.empty() ? "yes" : "no") << "\n" << st.str();
  for (const auto& d : diff) std::cout << "diff: " << d << "\n";
  bool allSame = diff.empty();
  if (c.variants) {
    for (bool fuse : {true, false})
      for (bool comb : {true, false}) {
        GraphState out;
        RunStats vs = runCompiled(cp, g, fuse, comb, c.maxSupersteps, &out);
        bool same = graphsIdentical(ref, out);
        allSame = allSame && same;
        std::string name = std::string(fuse ? "fused" : "unfused") + (comb ? "+combiners" : "");
        std::cout << name << ": identical=" << (same ? "yes" : "no") << " supersteps=" << vs.supersteps
                  << " messages_sent=" << vs.messagesSent << " messages_combined=" << vs.messagesCombined << "\n";
        report["variants"][name] = statsJson(vs);
        report["variants"][name]["identical"] = same;
      }
  }
  writeStats(c, report);
  return allSame ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vertex-centric program compiler and simulator"};
  app.require_subcommand(1);
  Config c;

  auto addProgram = [&](CLI::App* sub) { sub->add_option("program", c.program, "Program file (.pal)")->required(); };
  auto addCompileFlags = [&](CLI::App* sub) {
    sub->add_flag("--no-fuse", c.noFuse, "Keep the separate loop-check superstep");
    sub->add_flag("--no-combiners", c.noCombiners, "Deliver every message uncombined");
  };
  auto addInput = [&](CLI::App* sub) {
    sub->add_option("--graph", c.graph, "Input graph file");
    sub->add_option("--gen", c.gen, "Generator: random:N:M[:undirected|directed|weighted] or chain:N");
    sub->add_option("--seed", c.seed, "Generator seed");
    sub->add_option("--max-supersteps", c.maxSupersteps, "Superstep cap (iteration cap for the reference engine)");
    sub->add_option("--stats-out", c.statsOut, "Write a JSON stats report here");
  };

  auto* compile = app.add_subcommand("compile", "Print the compiled state machine");
  addProgram(compile);
  addCompileFlags(compile);
  compile->add_option("--emit", c.emit, "What to print")->check(CLI::IsMember({"stm", "ast", "plan"}));

  auto* plan = app.add_subcommand("plan", "Print chain-access derivations");
  addProgram(plan);

  auto* run = app.add_subcommand("run", "Run a program and print the final graph");
  addProgram(run);
  addCompileFlags(run);
  addInput(run);
  run->add_option("--engine", c.engine, "Execution engine")->check(CLI::IsMember({"reference", "compiled"}));
  run->add_option("--out", c.out, "Write the final graph here instead of stdout");

  auto* compare = app.add_subcommand("compare", "Run both engines and diff the results");
  addProgram(compare);
  addCompileFlags(compare);
  addInput(compare);
  compare->add_flag("--variants", c.variants, "Also report fused/unfused and combiner on/off runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*compile) return cmdCompile(c);
    if (*plan) return cmdPlan(c);
    if (*run) return cmdRun(c);
    return cmdCompare(c);
  } catch (const CompileError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << d.format(c.program) << "\n";
    return 1;
  } catch (const GraphError& e) {
    std::cerr << "graph error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return 2;
  } catch (const RuntimeError& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
}
