// SPDX-License-Identifier: Apache-2.0

#include "jcore/values.hpp"

#include <deque>
#include <functional>
#include <sstream>

namespace jcore {

std::string Value::str() const {
  switch (kind) {
    case Kind::Bool: return num ? "true" : "false";
    case Kind::Unit: return "it";
    case Kind::Int: return std::to_string(num);
    case Kind::Nil: return "nil";
    case Kind::Loc: return loc.str();
  }
  return "?";
}

Value default_value(const Type& t) {
  switch (t.kind) {
    case Type::Kind::Bool: return Value::boolean(false);
    case Type::Kind::Unit: return Value::unit();
    case Type::Kind::Int: return Value::integer(0);
    case Type::Kind::Class:
    case Type::Kind::Null: return Value::nil();
  }
  return Value::unit();
}

const char* bottom_name(BottomReason r) {
  switch (r) {
    case BottomReason::NilDeref: return "NilDeref";
    case BottomReason::CastFailure: return "CastFailure";
    case BottomReason::ExplicitAbort: return "ExplicitAbort";
    case BottomReason::FuelExhausted: return "FuelExhausted";
  }
  return "?";
}

std::string Bottom::str() const {
  std::string out = bottom_name(reason);
  if (span.line > 0) out += " at " + span.str();
  if (!detail.empty()) out += ": " + detail;
  return out;
}

Location fresh(const std::string& cls, const Heap& h) {
  std::uint32_t i = 0;
  for (auto it = h.lower_bound(Location{cls, 0});
       it != h.end() && it->first.cls == cls && it->first.index == i; ++it) {
    ++i;
  }
  return {cls, i};
}

namespace {

bool value_closed(const Value& v, const Heap& h) {
  return !v.is_loc() || h.count(v.loc) > 0;
}

}  // namespace

bool heap_closed(const Heap& h) {
  for (const auto& [l, obj] : h) {
    for (const auto& [f, v] : obj) {
      if (!value_closed(v, h)) return false;
    }
  }
  return true;
}

bool store_closed(const Store& s, const Heap& h) {
  for (const auto& [x, v] : s) {
    if (!value_closed(v, h)) return false;
  }
  return true;
}

bool value_in_type(const ClassTable& ct, const Value& v, const Type& t) {
  switch (t.kind) {
    case Type::Kind::Bool: return v.kind == Value::Kind::Bool;
    case Type::Kind::Unit: return v.kind == Value::Kind::Unit;
    case Type::Kind::Int: return v.kind == Value::Kind::Int;
    case Type::Kind::Null: return v.kind == Value::Kind::Nil;
    case Type::Kind::Class:
      return v.kind == Value::Kind::Nil ||
             (v.is_loc() && ct.is_subclass(v.loc.cls, t.name));
  }
  return false;
}

std::set<Location> reachable(const Heap& h, const std::vector<Value>& roots) {
  std::set<Location> seen;
  std::deque<Location> work;
  for (const Value& v : roots) {
    if (v.is_loc() && seen.insert(v.loc).second) work.push_back(v.loc);
  }
  while (!work.empty()) {
    Location l = work.front();
    work.pop_front();
    auto it = h.find(l);
    if (it == h.end()) continue;
    for (const auto& [f, v] : it->second) {
      if (v.is_loc() && seen.insert(v.loc).second) work.push_back(v.loc);
    }
  }
  return seen;
}

GlobalState collect(const GlobalState& st) {
  std::vector<Value> roots;
  for (const auto& [x, v] : st.store) roots.push_back(v);
  GlobalState out;
  out.store = st.store;
  for (const Location& l : reachable(st.heap, roots)) {
    auto it = st.heap.find(l);
    if (it != st.heap.end()) out.heap.emplace(l, it->second);
  }
  return out;
}

std::string state_digest(const GlobalState& st) {
  std::ostringstream os;
  for (const auto& [x, v] : st.store) os << x << '=' << v.str() << ';';
  os << '|';
  for (const auto& [l, obj] : st.heap) {
    os << l.str() << '{';
    for (const auto& [f, v] : obj) os << f << '=' << v.str() << ',';
    os << '}';
  }
  std::size_t hsh = std::hash<std::string>{}(os.str());
  std::ostringstream hex;
  hex << std::hex << hsh;
  return hex.str();
}

std::string pretty_state(const ClassTable& ct, const GlobalState& st) {
  std::ostringstream os;
  os << "store:\n";
  std::vector<Location> order;
  std::set<Location> seen;
  auto visit = [&](const Value& v) {
    if (v.is_loc() && seen.insert(v.loc).second) order.push_back(v.loc);
  };
  for (const auto& [x, v] : st.store) {
    os << "  " << x << " = " << v.str() << "\n";
    visit(v);
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto it = st.heap.find(order[i]);
    if (it == st.heap.end()) continue;
    for (const FieldDecl& fd : ct.fields(order[i].cls)) {
      auto fv = it->second.find(fd.name);
      if (fv != it->second.end()) visit(fv->second);
    }
  }
  os << "heap:\n";
  for (const Location& l : order) {
    auto it = st.heap.find(l);
    if (it == st.heap.end()) {
      os << "  " << l.str() << " <dangling>\n";
      continue;
    }
    os << "  " << l.str() << " {";
    bool first = true;
    for (const FieldDecl& fd : ct.fields(l.cls)) {
      auto fv = it->second.find(fd.name);
      if (fv == it->second.end()) continue;
      os << (first ? " " : ", ") << fd.name << " = " << fv->second.str();
      first = false;
    }
    os << (first ? "}" : " }") << "\n";
  }
  return os.str();
}

}  // namespace jcore
