// SPDX-License-Identifier: Apache-2.0
//
// Semantic domains: locations, values, heaps, stores, outcomes.

#ifndef JCORE_VALUES_HPP
#define JCORE_VALUES_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "jcore/ast.hpp"
#include "jcore/class_table.hpp"

namespace jcore {

// loctype is the class component.
struct Location {
  std::string cls;
  std::uint32_t index = 0;

  auto operator<=>(const Location&) const = default;
  bool operator==(const Location&) const = default;
  std::string str() const { return cls + "@" + std::to_string(index); }
};

struct Value {
  enum class Kind { Bool, Unit, Int, Nil, Loc };

  Kind kind = Kind::Unit;
  std::int64_t num = 0;
  Location loc;

  static Value boolean(bool b) { return {Kind::Bool, b ? 1 : 0, {}}; }
  static Value unit() { return {Kind::Unit, 0, {}}; }
  static Value integer(std::int64_t n) { return {Kind::Int, n, {}}; }
  static Value nil() { return {Kind::Nil, 0, {}}; }
  static Value location(Location l) { return {Kind::Loc, 0, std::move(l)}; }

  bool is_loc() const { return kind == Kind::Loc; }
  bool truthy() const { return kind == Kind::Bool && num != 0; }
  bool operator==(const Value&) const = default;
  std::string str() const;
};

Value default_value(const Type& t);

using ObjectState = std::map<std::string, Value>;
using Heap = std::map<Location, ObjectState>;
using Store = std::map<std::string, Value>;

struct GlobalState {
  Heap heap;
  Store store;
  bool operator==(const GlobalState&) const = default;
};

enum class BottomReason { NilDeref, CastFailure, ExplicitAbort, FuelExhausted };
const char* bottom_name(BottomReason r);

struct Bottom {
  BottomReason reason = BottomReason::ExplicitAbort;
  std::string detail;
  Span span;

  bool operator==(const Bottom& o) const { return reason == o.reason; }
  std::string str() const;
};

template <class T>
class Outcome {
 public:
  Outcome(T v) : v_(std::move(v)) {}  // NOLINT
  Outcome(Bottom b) : v_(std::move(b)) {}  // NOLINT

  bool ok() const { return v_.index() == 0; }
  bool fuel_exhausted() const {
    return !ok() && bottom().reason == BottomReason::FuelExhausted;
  }
  const T& value() const { return std::get<0>(v_); }
  T& value() { return std::get<0>(v_); }
  const Bottom& bottom() const { return std::get<1>(v_); }

  bool operator==(const Outcome& o) const {
    if (ok() != o.ok()) return false;
    return ok() ? value() == o.value() : bottom() == o.bottom();
  }

 private:
  std::variant<T, Bottom> v_;
};

// Returns a location of the given class not in dom h.
using Allocator = std::function<Location(const std::string&, const Heap&)>;

// Least unused index for the class; depends only on the class slice.
Location fresh(const std::string& cls, const Heap& h);

bool heap_closed(const Heap& h);
bool store_closed(const Store& s, const Heap& h);
// Membership in the meaning of T, relative to loctype.
bool value_in_type(const ClassTable& ct, const Value& v, const Type& t);

std::set<Location> reachable(const Heap& h, const std::vector<Value>& roots);
GlobalState collect(const GlobalState& st);

// Stable hash of a state for traces.
std::string state_digest(const GlobalState& st);

// Deterministic listing of the collected state: store first, then objects in
// breadth-first order from the roots (ascending variable names).
std::string pretty_state(const ClassTable& ct, const GlobalState& st);

}  // namespace jcore

#endif  // JCORE_VALUES_HPP
