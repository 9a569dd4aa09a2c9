// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include "jcore/coupling.hpp"

namespace jcore {

namespace {

std::optional<Value> field(const Heap& h, const Location& l,
                           const std::string& f) {
  auto o = h.find(l);
  if (o == h.end()) return std::nullopt;
  auto v = o->second.find(f);
  if (v == o->second.end()) return std::nullopt;
  return v->second;
}

// o.g = nil = o'.g, or o.g.f = not o'.g.f
bool obool_negation(const TypedBijection&, const IslandView& a,
                    const IslandView& b) {
  auto ga = field(a.heap, a.owner, "g");
  auto gb = field(b.heap, b.owner, "g");
  if (!ga || !gb) return false;
  if (ga->kind == Value::Kind::Nil && gb->kind == Value::Kind::Nil) return true;
  if (!ga->is_loc() || !gb->is_loc()) return false;
  auto fa = field(a.heap, ga->loc, "f");
  auto fb = field(b.heap, gb->loc, "f");
  if (!fa || !fb || fa->kind != Value::Kind::Bool ||
      fb->kind != Value::Kind::Bool) {
    return false;
  }
  return fa->truthy() != fb->truthy();
}

// o.g = o'.g and o.g mod 2 = 0
bool ms_even(const TypedBijection&, const IslandView& a, const IslandView& b) {
  auto ga = field(a.heap, a.owner, "g");
  auto gb = field(b.heap, b.owner, "g");
  if (!ga || !gb || ga->kind != Value::Kind::Int ||
      gb->kind != Value::Kind::Int) {
    return false;
  }
  return ga->num == gb->num && ga->num % 2 == 0;
}

struct Walk {
  std::vector<Location> nodes;
  bool ok = true;
};

// Nodes after the head: from fst, or from the sentinel's successor.
Walk list_of(const IslandView& v) {
  Walk w;
  std::optional<Value> cur = field(v.heap, v.owner, "fst");
  if (!cur) {
    auto snt = field(v.heap, v.owner, "snt");
    if (!snt || !snt->is_loc()) {
      w.ok = false;
      return w;
    }
    cur = field(v.heap, snt->loc, "nxt");
    auto sob = field(v.heap, snt->loc, "ob");
    if (!cur || (sob && sob->kind != Value::Kind::Nil)) {
      w.ok = false;
      return w;
    }
  }
  std::set<Location> seen;
  while (cur && cur->is_loc()) {
    if (!seen.insert(cur->loc).second || !v.heap.count(cur->loc)) {
      w.ok = false;
      return w;
    }
    w.nodes.push_back(cur->loc);
    cur = field(v.heap, cur->loc, "nxt");
  }
  if (!cur || cur->kind != Value::Kind::Nil) w.ok = false;
  return w;
}

// The same observer locations in the same order; any other node fields
// agree.
bool observer_list(const TypedBijection& sigma, const IslandView& a,
                   const IslandView& b) {
  Walk wa = list_of(a);
  Walk wb = list_of(b);
  if (!wa.ok || !wb.ok || wa.nodes.size() != wb.nodes.size()) return false;
  for (std::size_t i = 0; i < wa.nodes.size(); ++i) {
    const ObjectState& na = a.heap.at(wa.nodes[i]);
    const ObjectState& nb = b.heap.at(wb.nodes[i]);
    auto oa = na.find("ob");
    auto ob = nb.find("ob");
    if (oa == na.end() || ob == nb.end() ||
        !value_related(sigma, oa->second, ob->second)) {
      return false;
    }
    std::set<std::string> names;
    for (const auto& [f, v] : na) names.insert(f);
    for (const auto& [f, v] : nb) names.insert(f);
    for (const std::string& f : names) {
      if (f == "ob" || f == "nxt") continue;
      auto x = na.find(f);
      auto y = nb.find(f);
      if (x == na.end() || y == nb.end() ||
          !value_related(sigma, x->second, y->second)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

std::vector<std::string> builtin_coupling_names() {
  return {"ms-even", "obool-negation", "observer-list"};
}

std::optional<BasicCoupling> builtin_coupling(const std::string& name) {
  if (name == "obool-negation") {
    return BasicCoupling{name, "obool_v1 / obool_v2", obool_negation};
  }
  if (name == "ms-even") {
    return BasicCoupling{name, "ms_v1 / ms_v2", ms_even};
  }
  if (name == "observer-list") {
    return BasicCoupling{name, "observer versions", observer_list};
  }
  return std::nullopt;
}

}  // namespace jcore
