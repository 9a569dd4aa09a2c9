// SPDX-License-Identifier: Apache-2.0

#include "jcore/confinement.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "json.hpp"

namespace jcore {

const char* violation_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::ClientToRep: return "ClientToRep";
    case ViolationKind::SharedRep: return "SharedRep";
    case ViolationKind::NonPrivateOwnerEdge: return "NonPrivateOwnerEdge";
    case ViolationKind::RepEscapesIsland: return "RepEscapesIsland";
    case ViolationKind::RepWithoutOwner: return "RepWithoutOwner";
    case ViolationKind::StoreViolation: return "StoreViolation";
    case ViolationKind::ExtensionViolation: return "ExtensionViolation";
    case ViolationKind::ResultViolation: return "ResultViolation";
  }
  return "?";
}

std::string ConfinementViolation::str() const {
  std::string out = violation_name(kind);
  if (span.line > 0) out += " at " + span.str();
  out += ":";
  for (const Location& l : witness) out += " " + l.str();
  if (!field.empty()) out += " via " + field;
  if (!context.empty()) out += " (" + context + ")";
  return out;
}

std::string ConfinementViolation::json() const {
  nlohmann::json w = nlohmann::json::array();
  for (const Location& l : witness) w.push_back(l.str());
  nlohmann::json j{{"kind", violation_name(kind)},
                   {"witness", w},
                   {"field", field},
                   {"context", context},
                   {"line", span.line},
                   {"column", span.column}};
  return j.dump();
}

bool ConfinementViolation::operator==(const ConfinementViolation& o) const {
  return kind == o.kind && witness == o.witness && field == o.field &&
         span.line == o.span.line && span.column == o.span.column;
}

std::optional<std::size_t> Partition::island_of(const Location& l) const {
  for (std::size_t i = 0; i < islands.size(); ++i) {
    if (islands[i].owner == l || islands[i].reps.count(l)) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Partition::island_of_owner(
    const Location& o) const {
  for (std::size_t i = 0; i < islands.size(); ++i) {
    if (islands[i].owner == o) return i;
  }
  return std::nullopt;
}

namespace {

ConfinementViolation violation(ViolationKind k, std::vector<Location> w,
                               std::string field = {}) {
  ConfinementViolation v;
  v.kind = k;
  v.witness = std::move(w);
  v.field = std::move(field);
  return v;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// Island constraint accumulator: every constrained location must land in the
// same island.
struct Placement {
  const Partition& p;
  std::optional<std::size_t> island;
  bool conflict = false;

  void require(std::size_t i) {
    if (island && *island != i) conflict = true;
    island = i;
  }
};

}  // namespace

PartitionResult confine_heap(const ClassTable& ct, const Heap& h) {
  std::map<Location, Role> role;
  for (const auto& [l, obj] : h) role[l] = ct.role_of_class(l.cls);

  std::set<std::string> private_fields;
  if (ct.has_designations()) {
    for (const FieldDecl& fd : ct.dfields(ct.designations().own)) {
      private_fields.insert(fd.name);
    }
  }

  std::vector<Location> reps;
  std::map<Location, std::size_t> rep_index;
  for (const auto& [l, r] : role) {
    if (r == Role::Rep) {
      rep_index[l] = reps.size();
      reps.push_back(l);
    }
  }

  UnionFind uf(reps.size());
  for (const auto& [l, obj] : h) {
    for (const auto& [f, v] : obj) {
      if (!v.is_loc() || !h.count(v.loc)) continue;
      Role src = role[l];
      Role dst = role[v.loc];
      if (src == Role::Client && dst == Role::Rep) {
        return violation(ViolationKind::ClientToRep, {l, v.loc}, f);
      }
      if (src == Role::Owner && dst == Role::Rep && !private_fields.count(f)) {
        return violation(ViolationKind::NonPrivateOwnerEdge, {l, v.loc}, f);
      }
      if (src == Role::Rep && dst == Role::Rep) {
        uf.unite(rep_index[l], rep_index[v.loc]);
      }
    }
  }

  struct Attachment {
    Location owner;
    bool from_owner = false;
    Location via;
    std::string field;
  };
  std::map<std::size_t, Attachment> attached;
  auto attach = [&](std::size_t comp, Attachment a)
      -> std::optional<ConfinementViolation> {
    auto it = attached.find(comp);
    if (it == attached.end()) {
      attached.emplace(comp, std::move(a));
      return std::nullopt;
    }
    if (it->second.owner == a.owner) return std::nullopt;
    ViolationKind k = it->second.from_owner && a.from_owner
                          ? ViolationKind::SharedRep
                          : ViolationKind::RepEscapesIsland;
    return violation(k, {it->second.owner, a.owner, a.via}, a.field);
  };

  for (const auto& [l, obj] : h) {
    for (const auto& [f, v] : obj) {
      if (!v.is_loc() || !h.count(v.loc)) continue;
      Role src = role[l];
      Role dst = role[v.loc];
      std::optional<ConfinementViolation> bad;
      if (src == Role::Owner && dst == Role::Rep) {
        bad = attach(uf.find(rep_index[v.loc]), {l, true, v.loc, f});
      } else if (src == Role::Rep && dst == Role::Owner) {
        bad = attach(uf.find(rep_index[l]), {v.loc, false, l, f});
      }
      if (bad) return *bad;
    }
  }

  Partition p;
  std::map<Location, std::size_t> island_index;
  for (const auto& [l, r] : role) {
    if (r == Role::Owner) {
      island_index[l] = p.islands.size();
      p.islands.push_back({l, {}});
    } else if (r == Role::Client) {
      p.clients.insert(l);
    }
  }
  std::map<std::size_t, std::set<Location>> loose;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    std::size_t c = uf.find(i);
    auto it = attached.find(c);
    if (it != attached.end()) {
      p.islands[island_index[it->second.owner]].reps.insert(reps[i]);
    } else {
      loose[c].insert(reps[i]);
      p.flexible_reps.insert(reps[i]);
    }
  }
  for (auto& [c, members] : loose) p.flexible_components.push_back(members);
  if (!p.flexible_reps.empty() && p.islands.empty()) {
    return violation(ViolationKind::RepWithoutOwner, {*p.flexible_reps.begin()});
  }
  return p;
}

std::optional<ConfinementViolation> confined_store(const ClassTable& ct,
                                                   const std::string& cls,
                                                   const Store& eta,
                                                   const Heap& h,
                                                   const Partition& p) {
  (void)h;
  Role r = ct.role_of_class(cls);
  auto self = eta.find("self");
  if (r == Role::Client) {
    for (const auto& [x, v] : eta) {
      if (v.is_loc() && ct.role_of_class(v.loc.cls) == Role::Rep) {
        auto w = violation(ViolationKind::StoreViolation, {v.loc}, x);
        w.context = "rep in store of client class " + cls;
        return w;
      }
    }
    return std::nullopt;
  }
  if (self == eta.end() || !self->second.is_loc()) return std::nullopt;

  Placement place{p, std::nullopt};
  auto constrain = [&](const Location& l) {
    if (auto i = p.island_of(l)) place.require(*i);
  };
  constrain(self->second.loc);
  for (const auto& [x, v] : eta) {
    if (!v.is_loc() || x == "self") continue;
    Role vr = ct.role_of_class(v.loc.cls);
    bool counted = vr == Role::Rep || (r == Role::Rep && vr == Role::Owner);
    if (!counted) continue;
    constrain(v.loc);
    if (place.conflict) {
      auto w = violation(ViolationKind::StoreViolation,
                         {self->second.loc, v.loc}, x);
      w.context = std::string(vr == Role::Rep ? "rep" : "owner") +
                  " outside the island of self in store of " + cls;
      return w;
    }
  }
  return std::nullopt;
}

std::optional<ConfinementViolation> check_hext(const ClassTable& ct,
                                               const Partition& pre,
                                               const Heap& post) {
  auto res = confine_heap(ct, post);
  if (auto* v = std::get_if<ConfinementViolation>(&res)) return *v;
  const Partition& q = std::get<Partition>(res);

  for (const Location& c : pre.clients) {
    if (!q.clients.count(c)) {
      auto w = violation(ViolationKind::ExtensionViolation, {c});
      w.context = "client block shrank";
      return w;
    }
  }
  std::map<Location, std::size_t> comp_of;
  for (std::size_t i = 0; i < q.flexible_components.size(); ++i) {
    for (const Location& l : q.flexible_components[i]) comp_of[l] = i;
  }
  std::map<std::size_t, Location> comp_owner;
  for (const Island& isl : pre.islands) {
    auto j = q.island_of_owner(isl.owner);
    if (!j) {
      auto w = violation(ViolationKind::ExtensionViolation, {isl.owner});
      w.context = "owner block vanished";
      return w;
    }
    for (const Location& r : isl.reps) {
      auto k = q.island_of(r);
      if (k && *k == *j) continue;
      if (!k && comp_of.count(r)) {
        auto [it, fresh_entry] = comp_owner.emplace(comp_of[r], isl.owner);
        if (fresh_entry || it->second == isl.owner) continue;
        auto w = violation(ViolationKind::ExtensionViolation,
                           {it->second, isl.owner, r});
        w.context = "reps of two islands merged";
        return w;
      }
      Location now = k ? q.islands[*k].owner : r;
      auto w = violation(ViolationKind::ExtensionViolation,
                         {isl.owner, now, r});
      w.context = "rep block of " + isl.owner.str() + " shrank";
      return w;
    }
  }
  return std::nullopt;
}

}  // namespace jcore
