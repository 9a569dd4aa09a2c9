// SPDX-License-Identifier: Apache-2.0

#include "jcore/coupling.hpp"

#include <filesystem>
#include <map>
#include <set>

#include "jcore/confinement.hpp"
#include "jcore/interpreter.hpp"
#include "jcore/program.hpp"
#include "json.hpp"

namespace jcore {

std::string ShapeError::str() const {
  return "clause " + std::to_string(clause) + ": " + message;
}

std::string CouplingFailure::str() const {
  std::string out;
  if (island > 0) out += "island " + std::to_string(island) + ": ";
  if (location) out += location->str() + ": ";
  return out + message;
}

std::optional<ShapeError> check_island_shape(const ClassTable& ct_a,
                                             const ClassTable& ct_b,
                                             const TypedBijection& sigma,
                                             const IslandView& a,
                                             const IslandView& b) {
  auto one_owner = [](const ClassTable& ct, const IslandView& v,
                      const char* side) -> std::optional<ShapeError> {
    int owners = 0;
    for (const auto& [l, obj] : v.heap) {
      if (ct.is_owner_class(l.cls)) ++owners;
    }
    if (owners != 1) {
      return ShapeError{1, std::string("island ") + side + " has " +
                               std::to_string(owners) + " owners"};
    }
    if (!v.heap.count(v.owner) || !ct.is_owner_class(v.owner.cls)) {
      return ShapeError{1, std::string("island ") + side +
                               " does not contain its owner " + v.owner.str()};
    }
    return std::nullopt;
  };
  if (auto e = one_owner(ct_a, a, "A")) return e;
  if (auto e = one_owner(ct_b, b, "B")) return e;
  if (a.owner.cls != b.owner.cls) {
    return ShapeError{1, "owners " + a.owner.str() + " and " + b.owner.str() +
                             " have different classes"};
  }
  auto f = sigma.forward(a.owner);
  if (!f || !(*f == b.owner)) {
    return ShapeError{1, "owners " + a.owner.str() + " and " + b.owner.str() +
                             " are not related"};
  }
  for (const auto* side : {&a, &b}) {
    const ClassTable& ct = side == &a ? ct_a : ct_b;
    for (const auto& [l, obj] : side->heap) {
      if (l == side->owner) continue;
      if (!ct.is_rep_class(l.cls)) {
        return ShapeError{2, l.str() + " in an island is not a rep"};
      }
    }
  }
  const std::string& own = ct_a.designations().own;
  std::set<std::string> priv;
  for (const FieldDecl& fd : ct_a.dfields(own)) priv.insert(fd.name);
  const ObjectState& oa = a.heap.at(a.owner);
  const ObjectState& ob = b.heap.at(b.owner);
  for (const FieldDecl& fd : ct_a.fields(a.owner.cls)) {
    if (priv.count(fd.name)) continue;
    auto va = oa.find(fd.name);
    auto vb = ob.find(fd.name);
    if (va == oa.end() || vb == ob.end() ||
        !value_related(sigma, va->second, vb->second)) {
      return ShapeError{3, "owner field " + fd.name + " differs"};
    }
  }
  return std::nullopt;
}

namespace {

IslandView island_view(const ClassTable& ct, const Heap& h,
                       const Island& is) {
  IslandView v;
  v.ct = &ct;
  v.owner = is.owner;
  v.heap[is.owner] = h.at(is.owner);
  for (const Location& r : is.reps) v.heap[r] = h.at(r);
  return v;
}

}  // namespace

std::optional<CouplingFailure> induced_heap_coupling(const ClassTable& ct_a,
                                                     const ClassTable& ct_b,
                                                     const TypedBijection& sigma,
                                                     const Heap& a,
                                                     const Heap& b,
                                                     const BasicCoupling& bc) {
  for (const auto& [x, y] : sigma.pairs()) {
    if (!a.count(x) || !b.count(y)) {
      return CouplingFailure{0, x, "related pair " + x.str() + "/" + y.str() +
                                       " outside the heaps"};
    }
  }
  PartitionResult ra = confine_heap(ct_a, a);
  PartitionResult rb = confine_heap(ct_b, b);
  if (auto* v = std::get_if<ConfinementViolation>(&ra)) {
    return CouplingFailure{0, std::nullopt, "heap A not confined: " + v->str()};
  }
  if (auto* v = std::get_if<ConfinementViolation>(&rb)) {
    return CouplingFailure{0, std::nullopt, "heap B not confined: " + v->str()};
  }
  const Partition& pa = std::get<Partition>(ra);
  const Partition& pb = std::get<Partition>(rb);
  if (pa.islands.size() != pb.islands.size()) {
    return CouplingFailure{0, std::nullopt, "island counts differ"};
  }
  for (std::size_t i = 0; i < pa.islands.size(); ++i) {
    int idx = static_cast<int>(i) + 1;
    const Island& ia = pa.islands[i];
    auto f = sigma.forward(ia.owner);
    if (!f) {
      return CouplingFailure{idx, ia.owner, "owner is not related"};
    }
    auto j = pb.island_of_owner(*f);
    if (!j) {
      return CouplingFailure{idx, ia.owner,
                             "related location " + f->str() + " owns no island"};
    }
    IslandView va = island_view(ct_a, a, ia);
    IslandView vb = island_view(ct_b, b, pb.islands[*j]);
    if (auto e = check_island_shape(ct_a, ct_b, sigma, va, vb)) {
      return CouplingFailure{idx, ia.owner, "shape " + e->str()};
    }
    if (!bc.holds(sigma, va, vb)) {
      return CouplingFailure{idx, ia.owner, bc.name + " does not hold"};
    }
  }
  for (const Location& c : pa.clients) {
    auto f = sigma.forward(c);
    if (!f || !pb.clients.count(*f)) {
      return CouplingFailure{0, c, "client has no related client"};
    }
    const ObjectState& oa = a.at(c);
    const ObjectState& ob = b.at(*f);
    if (oa.size() != ob.size()) {
      return CouplingFailure{0, c, "field sets differ"};
    }
    for (const auto& [name, v] : oa) {
      auto w = ob.find(name);
      if (w == ob.end() || !value_related(sigma, v, w->second)) {
        return CouplingFailure{0, c, "field " + name + " differs"};
      }
    }
  }
  for (const Location& c : pb.clients) {
    auto g = sigma.backward(c);
    if (!g || !pa.clients.count(*g)) {
      return CouplingFailure{0, c, "client of B has no related client"};
    }
  }
  return std::nullopt;
}

const char* phase_name(SimPhase p) {
  return p == SimPhase::Establishment ? "establishment" : "preservation";
}

bool CouplingReport::passed() const { return failure_count() == 0; }

int CouplingReport::failure_count() const {
  int n = 0;
  for (const MethodCoverage& c : coverage) n += c.failures;
  return n;
}

std::string CouplingReport::json() const {
  nlohmann::json cov = nlohmann::json::array();
  for (const MethodCoverage& c : coverage) {
    cov.push_back({{"phase", phase_name(c.phase)},
                   {"method", c.method},
                   {"vectors", c.vectors},
                   {"checks", c.checks},
                   {"failures", c.failures}});
  }
  nlohmann::json fs = nlohmann::json::array();
  for (const SimFailure& f : failures) {
    fs.push_back({{"phase", phase_name(f.phase)},
                  {"method", f.method},
                  {"fuel", f.fuel},
                  {"script", f.script},
                  {"detail", f.detail},
                  {"stateA", f.state_a},
                  {"stateB", f.state_b}});
  }
  nlohmann::json j{{"coupling", coupling},
                   {"evidence", "bounded"},
                   {"fuels", fuels},
                   {"maxScript", max_script},
                   {"states", states},
                   {"passed", passed()},
                   {"failureCount", failure_count()},
                   {"coverage", cov},
                   {"failures", fs}};
  return j.dump();
}

std::string CouplingReport::text() const {
  std::string out = "coupling " + coupling + " (bounded evidence)\n";
  out += "fuels:";
  for (int f : fuels) out += " " + std::to_string(f);
  out += "\nscripts up to " + std::to_string(max_script) + " steps, " +
         std::to_string(states) + " related state pairs\n";
  for (const MethodCoverage& c : coverage) {
    out += std::string("  ") + phase_name(c.phase) + " " + c.method + ": " +
           std::to_string(c.checks - c.failures) + "/" +
           std::to_string(c.checks) + " ok\n";
  }
  for (const SimFailure& f : failures) {
    out += std::string("FAIL ") + phase_name(f.phase) + " " + f.method +
           " at fuel " + std::to_string(f.fuel) + ": " + f.detail + "\n";
    for (const std::string& s : f.script) out += "    " + s + "\n";
  }
  out += passed() ? "result: pass\n"
                  : "result: " + std::to_string(failure_count()) +
                        " failures\n";
  return out;
}

namespace {

struct Side {
  Heap heap;
  Store roots;
};

struct DState {
  Side a;
  Side b;
  TypedBijection sigma;
  std::vector<std::string> script;
  int next_var = 0;
};

struct Step {
  std::string recv;
  std::string method;
  std::vector<std::string> arg_text;
  std::vector<Value> args_a;
  std::vector<Value> args_b;
  bool keep_result = true;
  bool leaked = false;
};

struct ArgChoice {
  std::string text;
  Value a;
  Value b;
};

TypedBijection restrict(const TypedBijection& s, const Heap& a,
                        const Heap& b) {
  TypedBijection out;
  for (const auto& [x, y] : s.pairs()) {
    if (a.count(x) && b.count(y)) out.add(x, y);
  }
  return out;
}

class Harness {
 public:
  Harness(const ClassTable& a, const ClassTable& b, const BasicCoupling& bc,
          const SimOptions& opt)
      : a_(a),
        b_(b),
        bc_(bc),
        opt_(opt),
        ia_(a, fresh, nullptr, opt.loop_cap),
        ib_(b, fresh, nullptr, opt.loop_cap) {
    report_.coupling = bc.name;
    report_.fuels = opt.fuels;
    report_.max_script = opt.max_script;
  }

  CouplingReport run() {
    const std::string& own = a_.designations().own;
    for (const std::string& c : a_.class_names()) {
      if (a_.is_subclass(c, own)) owner_classes_.push_back(c);
    }
    DState root = seeds();
    std::vector<std::string> owner_vars;
    for (const std::string& c : owner_classes_) {
      auto child = establish(root, c);
      if (!child) continue;
      root = std::move(*child);
      owner_vars.push_back(last_var_);
    }
    for (const std::string& o : owner_vars) explore(root, o, 0);
    for (auto& [key, cov] : coverage_) report_.coverage.push_back(cov);
    return report_;
  }

 private:
  std::string name_of(const Value& v) const {
    return v.is_loc() ? v.loc.cls : "";
  }

  std::vector<std::string> tested_methods(const std::string& cls) const {
    std::vector<std::string> out;
    for (const std::string& m : a_.methods_of(cls)) {
      if (!a_.mscope(m, cls) || a_.prot(m)) out.push_back(m);
    }
    return out;
  }

  DState seeds() {
    std::set<std::string> wanted;
    for (const std::string& c : owner_classes_) {
      for (const std::string& m : tested_methods(c)) {
        const std::vector<Type> params = a_.mtype(m, c)->params;
        for (const Type& t : params) {
          if (!t.is_class()) continue;
          for (const std::string& k : a_.class_names()) {
            if (a_.role_of_class(k) == Role::Client &&
                a_.is_subclass(k, t.name)) {
              wanted.insert(k);
            }
          }
        }
      }
    }
    DState s;
    for (const std::string& k : wanted) {
      auto ra = ia_.new_object(k, s.a.heap);
      auto rb = ib_.new_object(k, s.b.heap);
      if (!ra.ok() || !rb.ok()) continue;
      std::string v = "c" + std::to_string(s.next_var++);
      s.a.heap = ra.value().first;
      s.b.heap = rb.value().first;
      s.a.roots[v] = Value::location(ra.value().second);
      s.b.roots[v] = Value::location(rb.value().second);
      s.sigma.add(ra.value().second, rb.value().second);
      s.script.push_back(v + " := new " + k);
    }
    return s;
  }

  MethodCoverage& cov(SimPhase p, const std::string& m) {
    MethodCoverage& c = coverage_[{p, m}];
    c.phase = p;
    c.method = m;
    return c;
  }

  void fail(const DState& pre, SimPhase p, const std::string& method,
            int fuel, const std::string& step, std::string detail) {
    ++cov(p, method).failures;
    if (report_.failures.size() >= opt_.max_failures) return;
    SimFailure f;
    f.phase = p;
    f.method = method;
    f.fuel = fuel;
    f.script = pre.script;
    f.script.push_back(step);
    f.detail = std::move(detail);
    f.state_a = pretty_state(a_, {pre.a.heap, pre.a.roots});
    f.state_b = pretty_state(b_, {pre.b.heap, pre.b.roots});
    report_.failures.push_back(std::move(f));
  }

  // Relates post-states extending sigma; returns the reason on failure.
  std::optional<std::string> related(const TypedBijection& sigma,
                                     const GlobalState& ga,
                                     const GlobalState& gb,
                                     TypedBijection& out) const {
    GlobalState ca = collect(ga);
    GlobalState cb = collect(gb);
    BijectionResult br =
        canonical_bijection(a_, b_, ca, cb, restrict(sigma, ca.heap, cb.heap),
                            TraversalOptions{true});
    if (!br.ok) return "client states differ at " + br.path + ": " + br.reason;
    if (auto e = induced_heap_coupling(a_, b_, br.sigma, ca.heap, cb.heap, bc_)) {
      return "coupling fails: " + e->str();
    }
    out = br.sigma;
    return std::nullopt;
  }

  std::optional<DState> establish(const DState& s, const std::string& cls) {
    std::string method = cls + ".<con>";
    MethodCoverage& c = cov(SimPhase::Establishment, method);
    ++c.vectors;
    ++c.checks;
    std::string v = "o" + std::to_string(s.next_var);
    std::string step = v + " := new " + cls;
    auto ra = ia_.new_object(cls, s.a.heap);
    auto rb = ib_.new_object(cls, s.b.heap);
    if (!ra.ok() && !rb.ok()) return std::nullopt;
    if (ra.ok() != rb.ok()) {
      fail(s, SimPhase::Establishment, method, 0, step,
           std::string("only ") + (ra.ok() ? "B" : "A") + " aborts: " +
               (ra.ok() ? rb.bottom() : ra.bottom()).str());
      return std::nullopt;
    }
    DState n = s;
    n.a.heap = ra.value().first;
    n.b.heap = rb.value().first;
    n.a.roots[v] = Value::location(ra.value().second);
    n.b.roots[v] = Value::location(rb.value().second);
    if (!n.sigma.add(ra.value().second, rb.value().second)) {
      fail(s, SimPhase::Establishment, method, 0, step,
           "new owners cannot be related");
      return std::nullopt;
    }
    TypedBijection out;
    if (auto why = related(n.sigma, {n.a.heap, n.a.roots},
                           {n.b.heap, n.b.roots}, out)) {
      fail(s, SimPhase::Establishment, method, 0, step, *why);
      return std::nullopt;
    }
    n.sigma = out;
    n.script.push_back(step);
    ++n.next_var;
    last_var_ = v;
    return n;
  }

  std::vector<ArgChoice> choices(const DState& s, const Type& t) const {
    std::vector<ArgChoice> out;
    switch (t.kind) {
      case Type::Kind::Bool:
        out.push_back({"true", Value::boolean(true), Value::boolean(true)});
        out.push_back({"false", Value::boolean(false), Value::boolean(false)});
        break;
      case Type::Kind::Int:
        out.push_back({"0", Value::integer(0), Value::integer(0)});
        out.push_back({"1", Value::integer(1), Value::integer(1)});
        break;
      case Type::Kind::Unit:
        out.push_back({"it", Value::unit(), Value::unit()});
        break;
      default:
        out.push_back({"null", Value::nil(), Value::nil()});
        if (!t.is_class()) break;
        for (const auto& [v, va] : s.a.roots) {
          if (!va.is_loc() || a_.role_of_class(va.loc.cls) == Role::Rep) {
            continue;
          }
          if (a_.is_subclass(va.loc.cls, t.name)) {
            out.push_back({v, va, s.b.roots.at(v)});
          }
        }
    }
    return out;
  }

  void expand(const DState& s, const std::string& recv,
              const std::string& cls, const std::string& m, bool leaked,
              std::vector<Step>& out) const {
    const std::vector<Type> params = a_.mtype(m, cls)->params;
    std::vector<Step> partial{Step{recv, m, {}, {}, {}, true, leaked}};
    for (const Type& t : params) {
      std::vector<Step> next;
      for (const Step& p : partial) {
        for (const ArgChoice& c : choices(s, t)) {
          Step q = p;
          q.arg_text.push_back(c.text);
          q.args_a.push_back(c.a);
          q.args_b.push_back(c.b);
          next.push_back(std::move(q));
        }
      }
      partial = std::move(next);
    }
    // Module-scoped results stay inside the module.
    for (Step& p : partial) p.keep_result = !a_.mscope(m, cls);
    out.insert(out.end(), partial.begin(), partial.end());
  }

  std::vector<Step> steps(const DState& s, const std::string& owner) const {
    std::vector<Step> out;
    const std::string cls = s.a.roots.at(owner).loc.cls;
    for (const std::string& m : tested_methods(cls)) {
      expand(s, owner, cls, m, false, out);
    }
    for (const auto& [v, va] : s.a.roots) {
      if (!va.is_loc() || a_.role_of_class(va.loc.cls) != Role::Rep) continue;
      for (const std::string& m : a_.methods_of(va.loc.cls)) {
        if (!a_.mscope(m, va.loc.cls)) expand(s, v, va.loc.cls, m, true, out);
      }
    }
    return out;
  }

  std::string step_text(const Step& st, const std::string& result_var) const {
    std::string call = st.recv + "." + st.method + "(";
    for (std::size_t i = 0; i < st.arg_text.size(); ++i) {
      call += (i ? ", " : "") + st.arg_text[i];
    }
    call += ")";
    return result_var.empty() ? call : result_var + " := " + call;
  }

  std::optional<DState> check(const DState& s, const Step& st, int fuel) {
    const Location& la = s.a.roots.at(st.recv).loc;
    const Location& lb = s.b.roots.at(st.recv).loc;
    std::string method = la.cls + "." + st.method;
    if (st.leaked) method += " (leaked)";
    ++cov(SimPhase::Preservation, method).checks;
    // Body under the environment at index fuel.
    auto ra = ia_.invoke(fuel + 1, la, st.method, st.args_a, s.a.heap);
    auto rb = ib_.invoke(fuel + 1, lb, st.method, st.args_b, s.b.heap);
    std::string text = step_text(st, "");
    if (!ra.ok() && !rb.ok()) return std::nullopt;
    if (ra.ok() != rb.ok()) {
      const Bottom& bot = ra.ok() ? rb.bottom() : ra.bottom();
      fail(s, SimPhase::Preservation, method, fuel, text,
           std::string("only ") + (ra.ok() ? "B" : "A") +
               " is bottom: " + bot.str());
      return std::nullopt;
    }
    const Value& res_a = ra.value().second;
    const Value& res_b = rb.value().second;
    DState n = s;
    n.a.heap = ra.value().first;
    n.b.heap = rb.value().first;
    bool keep = st.keep_result && res_a.is_loc() && res_b.is_loc();
    std::string var;
    if (keep) {
      bool rep = a_.role_of_class(res_a.loc.cls) == Role::Rep;
      var = (rep ? "w" : "r") + std::to_string(n.next_var++);
      n.a.roots[var] = res_a;
      n.b.roots[var] = res_b;
    }
    Store sa = n.a.roots;
    Store sb = n.b.roots;
    sa["$result"] = res_a;
    sb["$result"] = res_b;
    TypedBijection out;
    if (auto why = related(n.sigma, {n.a.heap, sa}, {n.b.heap, sb}, out)) {
      fail(s, SimPhase::Preservation, method, fuel, text, *why);
      return std::nullopt;
    }
    GlobalState ca = collect({n.a.heap, n.a.roots});
    GlobalState cb = collect({n.b.heap, n.b.roots});
    n.a.heap = std::move(ca.heap);
    n.b.heap = std::move(cb.heap);
    n.sigma = restrict(out, n.a.heap, n.b.heap);
    n.script.push_back(step_text(st, var));
    return n;
  }

  void explore(const DState& s, const std::string& owner, int depth) {
    ++report_.states;
    if (depth > 0) {
      for (const std::string& c : owner_classes_) establish(s, c);
    }
    if (depth >= opt_.max_script) return;
    int top = 0;
    for (int f : opt_.fuels) top = std::max(top, f);
    for (const Step& st : steps(s, owner)) {
      std::string method = s.a.roots.at(st.recv).loc.cls + "." + st.method;
      if (st.leaked) method += " (leaked)";
      ++cov(SimPhase::Preservation, method).vectors;
      std::optional<DState> child;
      for (int f : opt_.fuels) {
        auto r = check(s, st, f);
        if (f == top) child = std::move(r);
      }
      if (child) explore(*child, owner, depth + 1);
    }
  }

  const ClassTable& a_;
  const ClassTable& b_;
  const BasicCoupling& bc_;
  SimOptions opt_;
  Interpreter ia_;
  Interpreter ib_;
  CouplingReport report_;
  std::vector<std::string> owner_classes_;
  std::map<std::pair<SimPhase, std::string>, MethodCoverage> coverage_;
  std::string last_var_;
};

}  // namespace

CouplingReport test_simulation(const ClassTable& ct_a, const ClassTable& ct_b,
                               const BasicCoupling& bc,
                               const SimOptions& options) {
  return Harness(ct_a, ct_b, bc, options).run();
}

IdentityExtension identity_extension_check(const ClassTable& ct_a,
                                           const ClassTable& ct_b,
                                           const TypedBijection& sigma,
                                           const GlobalState& a,
                                           const GlobalState& b) {
  IdentityExtension r;
  GlobalState ca = collect(a);
  GlobalState cb = collect(b);
  if (!owner_free(ct_a, ca) || !owner_free(ct_b, cb)) {
    r.status = IdentityStatus::Precondition;
    r.reason = "an owner is reachable";
    return r;
  }
  BijectionResult br = canonical_bijection(ct_a, ct_b, ca, cb,
                                           restrict(sigma, ca.heap, cb.heap));
  r.sigma = br.sigma;
  if (!br.ok) {
    r.status = IdentityStatus::Fail;
    r.path = br.path;
    r.reason = br.reason;
  }
  return r;
}

SimManifest parse_sim_manifest(const std::string& json_text,
                               const std::string& base_dir) {
  SimManifest m;
  m.tables = parse_manifest(json_text, base_dir);
  nlohmann::json j = nlohmann::json::parse(json_text);
  try {
    if (!j.contains("coupling")) throw ManifestError("manifest needs coupling");
    m.coupling = j["coupling"].get<std::string>();
    if (j.contains("fuels")) {
      m.options.fuels = j["fuels"].get<std::vector<int>>();
    }
    m.options.max_script = j.value("maxScript", m.options.max_script);
    m.options.loop_cap = m.tables.budget.loop_cap;
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(std::string("bad manifest field: ") + e.what());
  }
  if (m.options.fuels.empty()) throw ManifestError("fuels must not be empty");
  for (int f : m.options.fuels) {
    if (f < 0) throw ManifestError("fuels must not be negative");
  }
  return m;
}

SimManifest load_sim_manifest(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::runtime_error& e) {
    throw ManifestError(e.what());
  }
  return parse_sim_manifest(
      text, std::filesystem::path(path).parent_path().string());
}

CouplingReport test_simulation(const SimManifest& m) {
  auto bc = builtin_coupling(m.coupling);
  if (!bc) throw ManifestError("unknown coupling " + m.coupling);
  ComparedTables t = load_compared(m.tables);
  return test_simulation(t.a, t.b, *bc, m.options);
}

}  // namespace jcore
