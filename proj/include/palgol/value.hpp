// SPDX-License-Identifier: Apache-2.0
//
// Runtime values of the vertex-centric DSL.

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "palgol/error.hpp"

namespace palgol {

using VertexId = std::int64_t;

/// A dynamically typed value. Vertex ids are stored as Int; the static type
/// system tracks the distinction. Compound values share their storage, so
/// copying a Value (e.g. an edge list) is cheap.
class Value {
 public:
  enum class Kind : std::uint8_t { Int, Float, Bool, Inf, NegInf, Pair, RefVal, List };

  Value() : kind_(Kind::Int), i_(0) {}

  static Value integer(std::int64_t v) { Value r; r.kind_ = Kind::Int; r.i_ = v; return r; }
  static Value real(double v) { Value r; r.kind_ = Kind::Float; r.f_ = v; return r; }
  static Value boolean(bool v) { Value r; r.kind_ = Kind::Bool; r.b_ = v; return r; }
  static Value inf() { Value r; r.kind_ = Kind::Inf; return r; }
  static Value negInf() { Value r; r.kind_ = Kind::NegInf; return r; }
  static Value pair(Value a, Value b);
  static Value refVal(Value ref, Value val);
  static Value list(std::vector<Value> items);

  Kind kind() const { return kind_; }
  bool isInt() const { return kind_ == Kind::Int; }
  bool isFloat() const { return kind_ == Kind::Float; }
  bool isBool() const { return kind_ == Kind::Bool; }
  bool isInfinite() const { return kind_ == Kind::Inf || kind_ == Kind::NegInf; }
  bool isNumeric() const { return isInt() || isFloat() || isInfinite(); }

  std::int64_t asInt() const;
  double asFloat() const;  // Int widens
  bool asBool() const;
  VertexId asVertex() const { return asInt(); }
  /// Components of a Pair or RefVal, or the elements of a List.
  const std::vector<Value>& items() const;

  /// Bit-exact structural identity (floats compared by representation).
  friend bool identical(const Value& a, const Value& b);

  std::string str() const;

 private:
  Kind kind_;
  union {
    std::int64_t i_;
    double f_;
    bool b_;
  };
  std::shared_ptr<const std::vector<Value>> items_;
};

enum class BinOp : std::uint8_t { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnOp : std::uint8_t { Neg, Not };

/// Accumulative operators usable for remote writes and reductions.
enum class AccOp : std::uint8_t { Sum, Min, Max, Or, And, Product };

/// Language-level arithmetic and comparison; `inf` saturates.
Value applyBinary(BinOp op, const Value& a, const Value& b);
Value applyUnary(UnOp op, const Value& a);
/// Total order over comparable values (numbers, infinities, bools).
int compareValues(const Value& a, const Value& b);
bool valuesEqual(const Value& a, const Value& b);

Value accIdentity(AccOp op);
Value accApply(AccOp op, const Value& acc, const Value& x);

const char* accOpSymbol(AccOp op);   // "+=", "<?=", ...
const char* accOpName(AccOp op);     // "sum", "min", ...
const char* binOpSymbol(BinOp op);

}  // namespace palgol
