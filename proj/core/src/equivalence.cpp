// SPDX-License-Identifier: Apache-2.0

#include "jcore/equivalence.hpp"

#include <deque>
#include <filesystem>
#include <set>

#include "jcore/program.hpp"
#include "jcore/typechecker.hpp"
#include "json.hpp"

namespace jcore {

bool TypedBijection::consistent(const Location& a, const Location& b) const {
  if (a.cls != b.cls) return false;
  auto f = fwd_.find(a);
  if (f != fwd_.end()) return f->second == b;
  return bwd_.find(b) == bwd_.end();
}

bool TypedBijection::add(const Location& a, const Location& b) {
  if (!consistent(a, b)) return false;
  fwd_[a] = b;
  bwd_[b] = a;
  return true;
}

std::optional<Location> TypedBijection::forward(const Location& a) const {
  auto it = fwd_.find(a);
  if (it == fwd_.end()) return std::nullopt;
  return it->second;
}

std::optional<Location> TypedBijection::backward(const Location& b) const {
  auto it = bwd_.find(b);
  if (it == bwd_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<Location, Location>> TypedBijection::pairs() const {
  return {fwd_.begin(), fwd_.end()};
}

bool TypedBijection::is_identity() const {
  for (const auto& [a, b] : fwd_) {
    if (!(a == b)) return false;
  }
  return true;
}

void align_declarations(std::vector<ClassDecl>& a, std::vector<ClassDecl>& b,
                        const std::string& own) {
  auto names = [](const std::vector<ClassDecl>& v) {
    std::set<std::string> s;
    for (const ClassDecl& c : v) s.insert(c.name);
    return s;
  };
  std::set<std::string> na = names(a);
  std::set<std::string> nb = names(b);
  std::vector<ClassDecl> to_b;
  std::vector<ClassDecl> to_a;
  for (const ClassDecl& c : a) {
    if (c.name != own && !nb.count(c.name)) to_b.push_back(c);
  }
  for (const ClassDecl& c : b) {
    if (c.name != own && !na.count(c.name)) to_a.push_back(c);
  }
  a.insert(a.end(), to_a.begin(), to_a.end());
  b.insert(b.end(), to_b.begin(), to_b.end());
}

std::optional<ComparabilityError> check_comparable(const ClassTable& a,
                                                   const ClassTable& b) {
  if (!(a.designations() == b.designations())) {
    return ComparabilityError{"designations", "tables use different designations"};
  }
  const std::string& own = a.designations().own;
  if (!own.empty() && (!a.is_declared(own) || !b.is_declared(own))) {
    return ComparabilityError{own, "owner class missing on one side"};
  }
  if (a.class_names() != b.class_names()) {
    return ComparabilityError{"classes", "declared class names differ"};
  }
  for (const std::string& c : a.class_names()) {
    if (c == own) continue;
    if (!same_structure(*a.decl(c), *b.decl(c))) {
      return ComparabilityError{c, "declarations differ outside the owner class"};
    }
  }
  if (own.empty()) return std::nullopt;
  if (a.super(own) != b.super(own)) {
    return ComparabilityError{own, "owner classes have different superclasses"};
  }
  auto one_way = [&](const ClassTable& x, const ClassTable& y)
      -> std::optional<ComparabilityError> {
    for (const std::string& m : x.methods_of(own)) {
      bool pub = !x.mscope(m, own);
      bool prot = x.prot(m);
      if (!pub && !prot) continue;
      auto sx = x.mtype(m, own);
      auto sy = y.mtype(m, own);
      if (!sy || !(*sx == *sy)) {
        return ComparabilityError{own + "." + m,
                                  "signature differs or is missing"};
      }
      if (pub && y.mscope(m, own)) {
        return ComparabilityError{own + "." + m,
                                  "public on one side, module-scoped on the other"};
      }
      if (prot && !y.mscope(m, own)) {
        return ComparabilityError{own + "." + m,
                                  "protected on one side, public on the other"};
      }
      if (*x.pars(m, own) != *y.pars(m, own)) {
        return ComparabilityError{own + "." + m, "parameter names differ"};
      }
    }
    return std::nullopt;
  };
  if (auto e = one_way(a, b)) return e;
  return one_way(b, a);
}

bool value_related(const TypedBijection& sigma, const Value& a,
                   const Value& b) {
  if (a.kind != b.kind) return false;
  if (!a.is_loc()) return a == b;
  auto f = sigma.forward(a.loc);
  return f && *f == b.loc;
}

bool owner_free(const ClassTable& ct, const GlobalState& st) {
  std::vector<Value> roots;
  for (const auto& [x, v] : st.store) roots.push_back(v);
  for (const Location& l : reachable(st.heap, roots)) {
    if (ct.is_owner_class(l.cls)) return false;
  }
  return true;
}

BijectionResult canonical_bijection(const ClassTable& ct_a,
                                    const ClassTable& ct_b,
                                    const GlobalState& a, const GlobalState& b,
                                    const TypedBijection& initial,
                                    TraversalOptions options) {
  (void)ct_b;
  BijectionResult r;
  r.sigma = initial;
  struct Item {
    Location la;
    Location lb;
    std::string path;
  };
  std::deque<Item> work;
  std::set<Location> visited;
  auto fail = [&](std::string path, std::string reason) {
    r.ok = false;
    r.path = std::move(path);
    r.reason = std::move(reason);
    return r;
  };
  // Returns a reason on mismatch.
  auto relate = [&](const Value& va, const Value& vb,
                    const std::string& path) -> std::optional<std::string> {
    if (va.kind != vb.kind || (!va.is_loc() && !(va == vb))) {
      return va.str() + " vs " + vb.str();
    }
    if (!va.is_loc()) return std::nullopt;
    if (va.loc.cls != vb.loc.cls) {
      return "class " + va.loc.cls + " vs " + vb.loc.cls;
    }
    if (!r.sigma.add(va.loc, vb.loc)) {
      return "aliasing differs at " + va.loc.str() + " / " + vb.loc.str();
    }
    if (visited.insert(va.loc).second) work.push_back({va.loc, vb.loc, path});
    return std::nullopt;
  };

  for (const auto& [x, vb] : b.store) {
    if (!a.store.count(x)) return fail(x, "variable only in second state");
  }
  for (const auto& [x, va] : a.store) {
    auto it = b.store.find(x);
    if (it == b.store.end()) return fail(x, "variable only in first state");
    if (auto why = relate(va, it->second, x)) return fail(x, *why);
  }
  while (!work.empty()) {
    Item it = work.front();
    work.pop_front();
    if (options.opaque_islands &&
        ct_a.role_of_class(it.la.cls) != Role::Client) {
      continue;
    }
    auto oa = a.heap.find(it.la);
    auto ob = b.heap.find(it.lb);
    if (oa == a.heap.end() || ob == b.heap.end()) {
      return fail(it.path, "dangling location");
    }
    if (oa->second.size() != ob->second.size()) {
      return fail(it.path, "field sets differ");
    }
    for (const FieldDecl& fd : ct_a.fields(it.la.cls)) {
      auto fa = oa->second.find(fd.name);
      auto fb = ob->second.find(fd.name);
      std::string path = it.path + "." + fd.name;
      if (fa == oa->second.end() || fb == ob->second.end()) {
        return fail(path, "missing field");
      }
      if (auto why = relate(fa->second, fb->second, path)) {
        return fail(path, *why);
      }
    }
  }
  r.ok = true;
  return r;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Equivalent: return "Equivalent";
    case Verdict::Distinguished: return "Distinguished";
    case Verdict::OwnersReachable: return "OwnersReachable";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string EquivResult::json() const {
  nlohmann::json s = nlohmann::json::array();
  for (const auto& [x, y] : sigma.pairs()) s.push_back({x.str(), y.str()});
  nlohmann::json j{{"verdict", verdict_name(verdict)},
                   {"entry", entry},
                   {"fuel", fuel},
                   {"sigma", s},
                   {"witness", witness},
                   {"outcomeA", outcome_a},
                   {"outcomeB", outcome_b}};
  return j.dump();
}

std::string EquivResult::text() const {
  std::string out = std::string("verdict: ") + verdict_name(verdict) + "\n";
  out += "entry: " + entry + "\n";
  out += "fuel: " + std::to_string(fuel) + "\n";
  out += "outcome A: " + outcome_a + "\n";
  out += "outcome B: " + outcome_b + "\n";
  if (!sigma.empty()) {
    out += "sigma:";
    for (const auto& [x, y] : sigma.pairs()) {
      out += " " + x.str() + "->" + y.str();
    }
    out += "\n";
  }
  if (!witness.empty()) out += "witness: " + witness + "\n";
  return out;
}

namespace {

std::string outcome_text(const Outcome<GlobalState>& o) {
  return o.ok() ? std::string("Ok") : o.bottom().str();
}

std::vector<std::string> paths_of(const nlohmann::json& j,
                                  const std::filesystem::path& base) {
  std::vector<std::string> out;
  auto one = [&](const nlohmann::json& p) {
    if (!p.is_string()) throw ManifestError("table paths must be strings");
    std::filesystem::path path(p.get<std::string>());
    out.push_back((path.is_absolute() ? path : base / path).string());
  };
  if (j.is_array()) {
    for (const auto& p : j) one(p);
  } else {
    one(j);
  }
  if (out.empty()) throw ManifestError("empty table list");
  return out;
}

}  // namespace

EquivManifest parse_manifest(const std::string& json_text,
                             const std::string& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("tableA") || !j.contains("tableB") ||
      !j.contains("own")) {
    throw ManifestError("manifest needs tableA, tableB and own");
  }
  std::filesystem::path base(base_dir);
  EquivManifest m;
  try {
    m.table_a = paths_of(j["tableA"], base);
    m.table_b = paths_of(j["tableB"], base);
    m.own = j["own"].get<std::string>();
    m.rep_a = j.value("repA", std::string());
    m.rep_b = j.value("repB", m.rep_a);
    if (j.contains("entry")) {
      m.entry_class = j["entry"].value("class", m.entry_class);
      m.entry_method = j["entry"].value("method", m.entry_method);
    }
    m.budget.max_fuel = j.value("maxFuel", m.budget.max_fuel);
    m.budget.loop_cap = j.value("loopCap", m.budget.loop_cap);
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(std::string("bad manifest field: ") + e.what());
  }
  return m;
}

EquivManifest load_manifest(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::runtime_error& e) {
    throw ManifestError(e.what());
  }
  return parse_manifest(text,
                        std::filesystem::path(path).parent_path().string());
}

Designations comparison_designations(const EquivManifest& m) {
  Designations d;
  d.own = m.own;
  d.rep = m.rep_a;
  if (m.rep_b != m.rep_a) d.rep2 = m.rep_b;
  return d;
}

ComparedTables load_compared(const EquivManifest& m) {
  auto sources = [](const std::vector<std::string>& paths) {
    std::vector<Source> out;
    for (const std::string& p : paths) out.push_back({p, read_file(p)});
    return out;
  };
  std::vector<ClassDecl> a = parse_sources(sources(m.table_a));
  std::vector<ClassDecl> b = parse_sources(sources(m.table_b));
  align_declarations(a, b, m.own);
  Designations d = comparison_designations(m);
  ClassTable ta = ClassTable::build(std::move(a), d);
  ClassTable tb = ClassTable::build(std::move(b), d);
  for (const ClassTable* t : {&ta, &tb}) {
    Report r = check_table(*t);
    if (!r.ok()) throw TypeCheckError(std::move(r));
  }
  if (auto e = check_comparable(ta, tb)) {
    throw ManifestError("tables are not comparable: " + e->str());
  }
  return {std::move(ta), std::move(tb)};
}

EquivResult client_equiv(const ClassTable& a, const ClassTable& b,
                         const std::string& entry_class,
                         const std::string& entry_method,
                         const Budget& budget) {
  EquivResult res;
  res.entry = entry_class + "." + entry_method;
  std::optional<RunResult> ra;
  std::optional<RunResult> rb;
  for (int fuel : fuel_schedule(budget.max_fuel)) {
    RunOptions o;
    o.budget = budget;
    o.fixed_fuel = fuel;
    if (!ra || ra->outcome.fuel_exhausted()) {
      ra = run(a, entry_class, entry_method, o);
    }
    if (!rb || rb->outcome.fuel_exhausted()) {
      rb = run(b, entry_class, entry_method, o);
    }
    res.fuel = fuel;
    if (!ra->outcome.fuel_exhausted() && !rb->outcome.fuel_exhausted()) break;
  }
  res.outcome_a = outcome_text(ra->outcome);
  res.outcome_b = outcome_text(rb->outcome);
  if (ra->outcome.fuel_exhausted() || rb->outcome.fuel_exhausted()) {
    res.verdict = Verdict::Inconclusive;
    res.witness = "fuel exhausted at " + std::to_string(res.fuel);
    return res;
  }
  bool ok_a = ra->outcome.ok();
  bool ok_b = rb->outcome.ok();
  if (!ok_a && !ok_b) {
    res.verdict = Verdict::Equivalent;
    return res;
  }
  if (ok_a != ok_b) {
    res.verdict = Verdict::Distinguished;
    res.witness = std::string("only ") + (ok_a ? "B" : "A") + " diverges";
    return res;
  }
  GlobalState ga = collect(ra->outcome.value());
  GlobalState gb = collect(rb->outcome.value());
  if (!owner_free(a, ga) || !owner_free(b, gb)) {
    res.verdict = Verdict::OwnersReachable;
    return res;
  }
  BijectionResult br = canonical_bijection(a, b, ga, gb);
  if (!br.ok) {
    res.verdict = Verdict::Distinguished;
    res.witness = br.path + ": " + br.reason;
    return res;
  }
  res.verdict = Verdict::Equivalent;
  res.sigma = br.sigma;
  return res;
}

EquivResult client_equiv(const EquivManifest& m) {
  ComparedTables t = load_compared(m);
  return client_equiv(t.a, t.b, m.entry_class, m.entry_method, m.budget);
}

}  // namespace jcore
