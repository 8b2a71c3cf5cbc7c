// SPDX-License-Identifier: Apache-2.0
//
// Tree-walking evaluation of step bodies for one vertex. Both engines use
// it: the reference interpreter reads remote fields straight from the
// snapshot, the compiled runtime overrides the hooks to read messages.

#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "palgol/ast.hpp"
#include "palgol/graph.hpp"
#include "palgol/sema.hpp"

namespace palgol {

struct Env {
  VertexId self = 0;
  std::string selfName;
  std::vector<std::pair<std::string, Value>> vars;

  const Value& lookup(const std::string& name) const;
};

struct RemoteWrite {
  VertexId target = 0;
  std::string field;
  AccOp op = AccOp::Sum;
  Value value;
  VertexId source = 0;
};

/// Folds a non-empty list left to right; an empty list yields the identity.
Value reduceValues(AccOp op, const std::vector<Value>& xs);

/// Converts a value for storage in `field` (int widens to float).
Value coerceForField(const FieldTable& types, const std::string& field, Value v);

class Evaluator {
 public:
  Evaluator(const GraphState& snapshot, const FieldTable& types) : g_(snapshot), types_(types) {}
  virtual ~Evaluator() = default;

  Value eval(const Expr& e, Env& env);

  /// Runs a step body for env.self. Reads see the snapshot; local writes
  /// land in `next`; remote writes are appended in execution order.
  void execBlock(const Block& block, Env& env, GraphState& next, std::vector<RemoteWrite>& remote);

 protected:
  virtual Value readField(const Expr& e, Env& env);
  virtual Value comprehension(const Expr& e, Env& env);
  /// Calls f on each element of the list a ForEach/comprehension walks.
  virtual void iterate(const void* node, const Expr& source, Env& env, const std::function<void(const Value&)>& f);

  Value genericComprehension(const Expr& e, Env& env);
  const Value& snapshotField(const Expr& e, const std::string& field, VertexId v) const;

  const GraphState& g_;
  const FieldTable& types_;
};

}  // namespace palgol
