// SPDX-License-Identifier: Apache-2.0

#include "palgol/value.hpp"

#include <charconv>
#include <cstring>

namespace palgol {

Value Value::pair(Value a, Value b) {
  Value r;
  r.kind_ = Kind::Pair;
  r.items_ = std::make_shared<const std::vector<Value>>(std::vector<Value>{std::move(a), std::move(b)});
  return r;
}

Value Value::refVal(Value ref, Value val) {
  Value r;
  r.kind_ = Kind::RefVal;
  r.items_ = std::make_shared<const std::vector<Value>>(std::vector<Value>{std::move(ref), std::move(val)});
  return r;
}

Value Value::list(std::vector<Value> items) {
  Value r;
  r.kind_ = Kind::List;
  r.items_ = std::make_shared<const std::vector<Value>>(std::move(items));
  return r;
}

std::int64_t Value::asInt() const {
  if (kind_ != Kind::Int) throw RuntimeError("expected an integer or vertex id, got " + str());
  return i_;
}

double Value::asFloat() const {
  if (kind_ == Kind::Float) return f_;
  if (kind_ == Kind::Int) return static_cast<double>(i_);
  throw RuntimeError("expected a number, got " + str());
}

bool Value::asBool() const {
  if (kind_ != Kind::Bool) throw RuntimeError("expected a boolean, got " + str());
  return b_;
}

const std::vector<Value>& Value::items() const {
  if (!items_) throw RuntimeError("expected a compound value, got " + str());
  return *items_;
}

bool identical(const Value& a, const Value& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Value::Kind::Int: return a.i_ == b.i_;
    case Value::Kind::Float: return std::memcmp(&a.f_, &b.f_, sizeof(double)) == 0;
    case Value::Kind::Bool: return a.b_ == b.b_;
    case Value::Kind::Inf:
    case Value::Kind::NegInf: return true;
    default: break;
  }
  if (a.items_ == b.items_) return true;
  const auto& xs = *a.items_;
  const auto& ys = *b.items_;
  if (xs.size() != ys.size()) return false;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!identical(xs[i], ys[i])) return false;
  return true;
}

static std::string formatDouble(double d) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), d);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string Value::str() const {
  switch (kind_) {
    case Kind::Int: return std::to_string(i_);
    case Kind::Float: return formatDouble(f_);
    case Kind::Bool: return b_ ? "true" : "false";
    case Kind::Inf: return "inf";
    case Kind::NegInf: return "-inf";
    case Kind::Pair: return "(" + (*items_)[0].str() + "," + (*items_)[1].str() + ")";
    case Kind::RefVal: return "{" + (*items_)[0].str() + "," + (*items_)[1].str() + "}";
    case Kind::List: {
      std::string s = "[";
      for (std::size_t i = 0; i < items_->size(); ++i) {
        if (i) s += ',';
        s += (*items_)[i].str();
      }
      return s + "]";
    }
  }
  return "?";
}

namespace {

int infRank(const Value& v) {
  if (v.kind() == Value::Kind::Inf) return 1;
  if (v.kind() == Value::Kind::NegInf) return -1;
  return 0;
}

Value zeroLike(const Value& v) { return v.isFloat() ? Value::real(0.0) : Value::integer(0); }

bool isNegative(const Value& v) { return v.isFloat() ? v.asFloat() < 0 : v.asInt() < 0; }
bool isZero(const Value& v) { return v.isFloat() ? v.asFloat() == 0 : v.asInt() == 0; }

Value infArithmetic(BinOp op, const Value& a, const Value& b) {
  int ra = infRank(a), rb = infRank(b);
  auto signedInf = [](int sign) { return sign > 0 ? Value::inf() : Value::negInf(); };
  switch (op) {
    case BinOp::Add:
      if (ra && rb && ra != rb) break;
      return signedInf(ra ? ra : rb);
    case BinOp::Sub:
      if (ra && rb && ra == rb) break;
      return signedInf(ra ? ra : -rb);
    case BinOp::Mul: {
      const Value& finite = ra ? b : a;
      int sign = ra ? ra : rb;
      if (ra && rb) return signedInf(ra * rb);
      if (isZero(finite)) break;
      return signedInf(isNegative(finite) ? -sign : sign);
    }
    case BinOp::Div:
      if (ra && rb) break;
      if (rb) return zeroLike(a);
      if (isZero(b)) throw RuntimeError("division by zero");
      return signedInf(isNegative(b) ? -ra : ra);
    default: break;
  }
  throw RuntimeError("undefined arithmetic on infinity: " + a.str() + " " + binOpSymbol(op) + " " + b.str());
}

Value arithmetic(BinOp op, const Value& a, const Value& b) {
  if (a.isInfinite() || b.isInfinite()) return infArithmetic(op, a, b);
  if (a.isInt() && b.isInt()) {
    std::int64_t x = a.asInt(), y = b.asInt();
    switch (op) {
      case BinOp::Add: return Value::integer(x + y);
      case BinOp::Sub: return Value::integer(x - y);
      case BinOp::Mul: return Value::integer(x * y);
      case BinOp::Div:
        if (y == 0) throw RuntimeError("division by zero");
        return Value::integer(x / y);
      case BinOp::Mod:
        if (y == 0) throw RuntimeError("division by zero");
        return Value::integer(x % y);
      default: break;
    }
  }
  double x = a.asFloat(), y = b.asFloat();
  switch (op) {
    case BinOp::Add: return Value::real(x + y);
    case BinOp::Sub: return Value::real(x - y);
    case BinOp::Mul: return Value::real(x * y);
    case BinOp::Div:
      if (y == 0) throw RuntimeError("division by zero");
      return Value::real(x / y);
    default: break;
  }
  throw RuntimeError(std::string("operator ") + binOpSymbol(op) + " not defined on " + a.str());
}

}  // namespace

int compareValues(const Value& a, const Value& b) {
  int ra = infRank(a), rb = infRank(b);
  if (ra || rb) {
    if (ra != 0 && ra == rb) return 0;
    if (ra == 0 && !a.isNumeric()) throw RuntimeError("cannot compare " + a.str() + " with " + b.str());
    if (rb == 0 && !b.isNumeric()) throw RuntimeError("cannot compare " + a.str() + " with " + b.str());
    return (ra - rb) < 0 ? -1 : 1;
  }
  if (a.isInt() && b.isInt()) return a.asInt() < b.asInt() ? -1 : (a.asInt() > b.asInt() ? 1 : 0);
  if (a.isNumeric() && b.isNumeric()) {
    double x = a.asFloat(), y = b.asFloat();
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  if (a.isBool() && b.isBool()) return int(a.asBool()) - int(b.asBool());
  if ((a.kind() == Value::Kind::Pair || a.kind() == Value::Kind::RefVal) && a.kind() == b.kind()) {
    int c = compareValues(a.items()[0], b.items()[0]);
    return c ? c : compareValues(a.items()[1], b.items()[1]);
  }
  throw RuntimeError("cannot compare " + a.str() + " with " + b.str());
}

bool valuesEqual(const Value& a, const Value& b) {
  if (a.isNumeric() && b.isNumeric()) return compareValues(a, b) == 0;
  if (a.kind() != b.kind()) return false;
  if (a.isBool()) return a.asBool() == b.asBool();
  const auto& xs = a.items();
  const auto& ys = b.items();
  if (xs.size() != ys.size()) return false;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!valuesEqual(xs[i], ys[i])) return false;
  return true;
}

Value applyBinary(BinOp op, const Value& a, const Value& b) {
  switch (op) {
    case BinOp::Add:
    case BinOp::Sub:
    case BinOp::Mul:
    case BinOp::Div:
    case BinOp::Mod: return arithmetic(op, a, b);
    case BinOp::Eq: return Value::boolean(valuesEqual(a, b));
    case BinOp::Ne: return Value::boolean(!valuesEqual(a, b));
    case BinOp::Lt: return Value::boolean(compareValues(a, b) < 0);
    case BinOp::Le: return Value::boolean(compareValues(a, b) <= 0);
    case BinOp::Gt: return Value::boolean(compareValues(a, b) > 0);
    case BinOp::Ge: return Value::boolean(compareValues(a, b) >= 0);
    case BinOp::And: return Value::boolean(a.asBool() && b.asBool());
    case BinOp::Or: return Value::boolean(a.asBool() || b.asBool());
  }
  return {};
}

Value applyUnary(UnOp op, const Value& a) {
  if (op == UnOp::Not) return Value::boolean(!a.asBool());
  switch (a.kind()) {
    case Value::Kind::Int: return Value::integer(-a.asInt());
    case Value::Kind::Float: return Value::real(-a.asFloat());
    case Value::Kind::Inf: return Value::negInf();
    case Value::Kind::NegInf: return Value::inf();
    default: throw RuntimeError("cannot negate " + a.str());
  }
}

Value accIdentity(AccOp op) {
  switch (op) {
    case AccOp::Sum: return Value::integer(0);
    case AccOp::Min: return Value::inf();
    case AccOp::Max: return Value::negInf();
    case AccOp::Or: return Value::boolean(false);
    case AccOp::And: return Value::boolean(true);
    case AccOp::Product: return Value::integer(1);
  }
  return {};
}

Value accApply(AccOp op, const Value& acc, const Value& x) {
  switch (op) {
    case AccOp::Sum: return applyBinary(BinOp::Add, acc, x);
    case AccOp::Product: return applyBinary(BinOp::Mul, acc, x);
    case AccOp::Min: return compareValues(x, acc) < 0 ? x : acc;
    case AccOp::Max: return compareValues(x, acc) > 0 ? x : acc;
    case AccOp::Or: return Value::boolean(acc.asBool() || x.asBool());
    case AccOp::And: return Value::boolean(acc.asBool() && x.asBool());
  }
  return acc;
}

const char* accOpSymbol(AccOp op) {
  switch (op) {
    case AccOp::Sum: return "+=";
    case AccOp::Min: return "<?=";
    case AccOp::Max: return ">?=";
    case AccOp::Or: return "|=";
    case AccOp::And: return "&&=";
    case AccOp::Product: return "*=";
  }
  return "?";
}

const char* accOpName(AccOp op) {
  switch (op) {
    case AccOp::Sum: return "sum";
    case AccOp::Min: return "min";
    case AccOp::Max: return "max";
    case AccOp::Or: return "or";
    case AccOp::And: return "and";
    case AccOp::Product: return "product";
  }
  return "?";
}

const char* binOpSymbol(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
  }
  return "?";
}

}  // namespace palgol
