// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "palgol/lexer.hpp"
#include "palgol/parser.hpp"
#include "palgol/printer.hpp"

using namespace palgol;

namespace {

std::string firstDiagnostic(const std::string& src) {
  try {
    checkSource(src);
  } catch (const CompileError& e) {
    return e.diagnostics().at(0).message;
  }
  return "";
}

std::vector<std::string> allDiagnostics(const std::string& src) {
  try {
    checkSource(src);
  } catch (const CompileError& e) {
    std::vector<std::string> out;
    for (const auto& d : e.diagnostics()) out.push_back(d.format("p.pal"));
    return out;
  }
  return {};
}

// Random well-formed expressions for the print/parse round trip.
class ExprGen {
 public:
  explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

  std::string numeric(int depth) {
    switch (depth <= 0 ? pick(3) : pick(9)) {
      case 0: return std::to_string(pick(100));
      case 1: return "X[u]";
      case 2: return "inf";
      case 3: return "(" + numeric(depth - 1) + " + " + numeric(depth - 1) + ")";
      case 4: return "(" + numeric(depth - 1) + " * " + numeric(depth - 1) + ")";
      case 5: return "-" + numeric(depth - 1);
      case 6: return "(" + boolean(depth - 1) + " ? " + numeric(depth - 1) + " : " + numeric(depth - 1) + ")";
      case 7: return "minimum[" + numeric(depth - 1) + " | e <- Nbr[u]]";
      default: return "X[D[u]]";
    }
  }

  std::string boolean(int depth) {
    switch (depth <= 0 ? pick(2) : pick(6)) {
      case 0: return pick(2) ? "true" : "false";
      case 1: return "(X[u] == 3)";
      case 2: return "(" + numeric(depth - 1) + " < " + numeric(depth - 1) + ")";
      case 3: return "(" + boolean(depth - 1) + " && " + boolean(depth - 1) + ")";
      case 4: return "!" + boolean(depth - 1);
      default: return "(" + boolean(depth - 1) + " || " + boolean(depth - 1) + ")";
    }
  }

 private:
  int pick(int n) { return int(rng_() % unsigned(n)); }
  std::mt19937_64 rng_;
};

}  // namespace

TEST_SUITE("parser") {
  TEST_CASE("offside rule opens and closes blocks") {
    auto toks = tokenize("for u in V\n  D[u] := u\nend\n");
    int opens = 0, closes = 0;
    for (const auto& t : toks) {
      opens += t.kind == Token::Kind::BlockOpen;
      closes += t.kind == Token::Kind::BlockClose;
    }
    CHECK(opens == 1);
    CHECK(closes == 1);
  }

  TEST_CASE("S-V token stream nests as deep as its indentation") {
    auto toks = tokenize(oracle::corpus("sv"));
    int depth = 0, deepest = 0;
    for (const auto& t : toks) {
      if (t.kind == Token::Kind::BlockOpen) deepest = std::max(deepest, ++depth);
      if (t.kind == Token::Kind::BlockClose) --depth;
      CHECK(depth >= 0);
    }
    CHECK(depth == 0);
    CHECK(deepest == 4);  // do / for / if / if
    CHECK(toks.back().kind == Token::Kind::Eof);
  }

  TEST_CASE("lexical errors") {
    CHECK(firstDiagnostic("for u in V\n\tX[u] := 1\nend\n").find("tab") != std::string::npos);
    CHECK(firstDiagnostic("for u in V\n    X[u] := 1\n  Y[u] := 2\nend\n").find("inconsistent dedent") !=
          std::string::npos);
  }

  TEST_CASE("empty and malformed programs") {
    CHECK(firstDiagnostic("") == "empty program");
    CHECK(firstDiagnostic("# only a comment\n") == "empty program");
    CHECK(firstDiagnostic("do\n  for u in V\n    X[u] := 1\n  end\nuntil fix[]\n").find("at least one field") !=
          std::string::npos);
    CHECK(firstDiagnostic("for u in V\n  X[u] := 1\n").find("expected 'end'") != std::string::npos);
    CHECK(firstDiagnostic("for u in V\n  X[u] := (1 +\nend\n").find("unclosed '('") != std::string::npos);
  }

  TEST_CASE("error positions lie inside the source") {
    const char* bad[] = {"for u in V\n  X[u] := \nend\n", "for u in\n", "do\nuntil fix[D]\n", "for u in V\n  X[u] := 1\nen\n",
                         ")"};
    for (const char* src : bad) {
      std::string s = src;
      int lines = int(std::count(s.begin(), s.end(), '\n')) + 1;
      try {
        checkSource(s);
        FAIL("accepted: " << s);
      } catch (const CompileError& e) {
        for (const auto& d : e.diagnostics()) {
          CHECK(d.span.line >= 1);
          CHECK(d.span.line <= lines);
        }
      }
    }
  }

  TEST_CASE("corpus shapes") {
    Program sssp = parseSource(oracle::corpus("sssp"));
    REQUIRE(sssp.items.size() == 2);
    CHECK(std::holds_alternative<Step>(sssp.items[0]));
    const auto& it = std::get<Iter>(sssp.items[1]);
    CHECK(it.fixFields == std::vector<std::string>{"D"});
    REQUIRE(it.body->items.size() == 1);
    CHECK(std::holds_alternative<Step>(it.body->items[0]));

    Program lr = parseSource(oracle::corpus("lr"));
    REQUIRE(lr.items.size() == 2);
    CHECK(std::get<Iter>(lr.items[1]).fixFields == std::vector<std::string>{"Pred"});
  }

  TEST_CASE("pretty printing is a fixpoint on the corpus") {
    for (const char* name : {"sssp", "sv", "lr"}) {
      CAPTURE(name);
      std::string once = prettyPrint(parseSource(oracle::corpus(name)));
      std::string twice = prettyPrint(parseSource(once));
      CHECK(once == twice);
      CHECK(dumpTree(parseSource(once)) == dumpTree(parseSource(oracle::corpus(name))));
    }
  }

  TEST_CASE(".id reads as .ref") {
    std::string printed = prettyPrint(parseSource(oracle::corpus("sv")));
    CHECK(printed.find("D[e.ref]") != std::string::npos);
    CHECK(printed.find(".id") == std::string::npos);
  }

  TEST_CASE("generated expressions survive print and parse") {
    ExprGen gen(42);
    for (int i = 0; i < 300; ++i) {
      std::string src = "for u in V\n  Y[u] := " + gen.numeric(4) + "\n  B[u] := " + gen.boolean(3) + "\nend\n";
      CAPTURE(src);
      Program p = parseSource(src);
      std::string printed = prettyPrint(p);
      CHECK(dumpTree(parseSource(printed)) == dumpTree(p));
      CHECK(prettyPrint(parseSource(printed)) == printed);
    }
  }
}

TEST_SUITE("ast") {
  TEST_CASE("corpus programs validate") {
    for (const char* name : {"sssp", "sv", "lr"}) {
      CAPTURE(name);
      CHECK(allDiagnostics(oracle::corpus(name)).empty());
    }
  }

  TEST_CASE("inferred field types") {
    auto sv = checkSource(oracle::corpus("sv"));
    CHECK(sv.fields.at("D").type.base == ValueType::Base::Vertex);
    auto lr = checkSource(oracle::corpus("lr"));
    CHECK(lr.fields.at("Pred").type.base == ValueType::Base::Vertex);
    CHECK(lr.fields.at("Sum").type.base == ValueType::Base::Int);
    auto sssp = checkSource(oracle::corpus("sssp"));
    CHECK(sssp.fields.at("A").type.base == ValueType::Base::Bool);
    CHECK(sssp.fields.at("D").type.base == ValueType::Base::Int);
    CHECK_FALSE(sssp.fields.at("Id").isMutable);
  }

  TEST_CASE("a field used as int and bool names both sites") {
    auto diags = allDiagnostics("for u in V\n  X[u] := 1\nend\nfor u in V\n  X[u] := true\nend\n");
    REQUIRE(diags.size() == 2);
    std::sort(diags.begin(), diags.end());
    CHECK(diags[0].find("p.pal:2:") == 0);
    CHECK(diags[1].find("p.pal:5:") == 0);
  }

  TEST_CASE("validation diagnostics") {
    CHECK(firstDiagnostic("for u in V\n  Id[u] := 0\nend\n").find("immutable field") != std::string::npos);
    CHECK(firstDiagnostic("for u in V\n  remote D[D[u]] := 1\nend\n") == "remote assignment must be accumulative");
    CHECK(firstDiagnostic("for u in V\n  X[u] := {1}\nend\n").find("singleton") != std::string::npos);
    CHECK(firstDiagnostic("for u in V\n  X[u] := 1\nend\ndo\n  for u in V\n    X[u] := 2\n  end\nuntil fix[Q]\n") !=
          "");
  }

  TEST_CASE("unsupported remote reads") {
    CHECK(firstDiagnostic("for u in V\n  X[u] := D[D[u]]\n  Y[u] := D[(X[u] == u ? u : D[u])]\nend\n")
              .find("unsupported remote read") != std::string::npos);
    CHECK(firstDiagnostic("for u in V\n  for (e <- Nbr[u])\n    for (f <- Nbr[u])\n      X[u] += D[e.ref]\nend\n")
              .find("unsupported remote read") != std::string::npos);
  }

  TEST_CASE("remote read classification") {
    auto sv = checkSource(oracle::corpus("sv"));
    const auto& svStep = std::get<Step>(std::get<Iter>(sv.program.items[1]).body->items[0]);
    auto svReads = classifyRemoteReads(svStep, sv.fields);
    CHECK(svReads.chains == std::set<AccessPattern>{AccessPattern{"D", "D"}});
    CHECK(svReads.neighborhood == std::set<std::pair<std::string, AccessPattern>>{{"Nbr", AccessPattern{"D"}}});

    auto lr = checkSource(oracle::corpus("lr"));
    const auto& lrStep = std::get<Step>(std::get<Iter>(lr.program.items[1]).body->items[0]);
    auto lrReads = classifyRemoteReads(lrStep, lr.fields);
    CHECK(lrReads.chains == std::set<AccessPattern>{AccessPattern{"Pred", "Pred"}, AccessPattern{"Pred", "Sum"}});
    CHECK(lrReads.neighborhood.empty());

    auto local = checkSource("for u in V\n  X[u] := Y[u] + 1\nend\n");
    auto none = classifyRemoteReads(std::get<Step>(local.program.items[0]), local.fields);
    CHECK(none.chains.empty());
    CHECK(none.neighborhood.empty());
  }

  TEST_CASE("classification is exhaustive") {
    for (const char* name : {"sssp", "sv", "lr"}) {
      auto cp = checkSource(oracle::corpus(name));
      std::function<void(const Program&)> walk = [&](const Program& p) {
        for (const auto& item : p.items) {
          if (const auto* step = std::get_if<Step>(&item)) {
            auto reads = classifyRemoteReads(*step, cp.fields);
            forEachExpr(step->body, [&](const Expr& e) {
              if (e.kind == Expr::Kind::Field) CHECK(reads.accesses.count(&e) == 1);
            });
          } else if (const auto* it = std::get_if<Iter>(&item)) {
            walk(*it->body);
          }
        }
      };
      walk(cp.program);
    }
  }

  TEST_CASE("let-bound chain aliases are chains") {
    auto cp = checkSource("for u in V\n  let p = P[u]\n  X[u] := Q[p]\nend\n");
    auto reads = classifyRemoteReads(std::get<Step>(cp.program.items[0]), cp.fields);
    CHECK(reads.chains == std::set<AccessPattern>{AccessPattern{"P", "Q"}});
  }

  TEST_CASE("accumulative operators: identity and associativity") {
    std::mt19937_64 rng(7);
    auto randInt = [&] { return Value::integer(std::int64_t(rng() % 2001) - 1000); };
    for (AccOp op : {AccOp::Sum, AccOp::Min, AccOp::Max, AccOp::Product}) {
      for (int i = 0; i < 200; ++i) {
        Value x = randInt(), y = randInt(), z = randInt();
        CHECK(identical(accApply(op, x, accIdentity(op)), x));
        CHECK(identical(accApply(op, accApply(op, x, y), z), accApply(op, x, accApply(op, y, z))));
      }
    }
    for (AccOp op : {AccOp::Or, AccOp::And})
      for (bool a : {false, true})
        for (bool b : {false, true})
          for (bool c : {false, true}) {
            Value x = Value::boolean(a), y = Value::boolean(b), z = Value::boolean(c);
            CHECK(identical(accApply(op, x, accIdentity(op)), x));
            CHECK(identical(accApply(op, accApply(op, x, y), z), accApply(op, x, accApply(op, y, z))));
          }
    CHECK(identical(accApply(AccOp::Min, Value::inf(), Value::integer(3)), Value::integer(3)));
    CHECK(identical(applyBinary(BinOp::Add, Value::inf(), Value::integer(3)), Value::inf()));
  }
}
