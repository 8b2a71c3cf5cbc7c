// SPDX-License-Identifier: Apache-2.0
//
// Static analysis: type inference, structural validation, and
// classification of remote reads into chain and neighborhood accesses.

#pragma once

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "palgol/ast.hpp"
#include "palgol/pattern.hpp"

namespace palgol {

struct ValueType {
  enum class Base : std::uint8_t { Int, Float, Bool, Vertex, Pair, RefVal, List };

  Base base = Base::Int;
  std::vector<ValueType> args;

  static ValueType of(Base b, std::vector<ValueType> args = {}) { return {b, std::move(args)}; }
  std::string str() const;
  bool operator==(const ValueType&) const = default;
};

/// The type-default value stored in fields a graph file leaves unset.
/// Vertex-typed fields default to the owning vertex's id.
Value defaultValue(const ValueType& t, VertexId self);

struct FieldInfo {
  ValueType type;
  bool isMutable = true;
  bool predefined = false;
};

/// Field name -> type and mutability. Always contains Id, Nbr, In and Out.
class FieldTable {
 public:
  FieldTable();

  void set(const std::string& name, FieldInfo info) { fields_[name] = std::move(info); }
  const FieldInfo* find(const std::string& name) const;
  const FieldInfo& at(const std::string& name) const;
  bool contains(const std::string& name) const { return fields_.count(name) != 0; }
  const std::map<std::string, FieldInfo>& all() const { return fields_; }

  static bool isEdgeList(const std::string& name) { return name == "Nbr" || name == "In" || name == "Out"; }

 private:
  std::map<std::string, FieldInfo> fields_;
};

struct TypeInfo {
  FieldTable fields;
  std::unordered_map<const Expr*, ValueType> exprTypes;
};

/// Unifies every field read and assignment across the program. Throws
/// CompileError on conflicting uses, naming both sites for fields.
TypeInfo inferAll(const Program& program);
FieldTable inferTypes(const Program& program);

/// Structural checks beyond typing. Returns an empty list iff valid.
std::vector<Diagnostic> validate(const Program& program, const FieldTable& fields);

/// How a single field-access node reads its data.
struct AccessInfo {
  enum class Kind : std::uint8_t { Local, Chain, Neighbor };
  Kind kind = Kind::Local;
  AccessPattern pattern;  // Chain: full chain from u; Neighbor: {F}
  std::string edgeList;   // Neighbor only
  const void* loop = nullptr;  // Neighbor only: the Expr or Stmt of the edge loop
};

/// A loop over an edge list of the current vertex.
struct EdgeLoop {
  const void* node = nullptr;  // Comprehension Expr or ForEach Stmt
  bool isComprehension = false;
  std::string edgeList;
  std::string var;
};

struct RemoteReads {
  std::set<AccessPattern> chains;
  std::set<std::pair<std::string, AccessPattern>> neighborhood;
  std::unordered_map<const Expr*, AccessInfo> accesses;  // every Field node in the step
  std::vector<EdgeLoop> edgeLoops;
};

/// Classifies every field access of a validated step. Throws CompileError
/// for remote reads that are neither chain nor neighborhood accesses.
RemoteReads classifyRemoteReads(const Step& step, const FieldTable& fields);

/// Parse, infer, validate; throws CompileError with all diagnostics.
struct CheckedProgram {
  Program program;
  FieldTable fields;
};
CheckedProgram checkProgram(Program program);
CheckedProgram checkSource(std::string_view source);

}  // namespace palgol
