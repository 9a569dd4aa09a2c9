// SPDX-License-Identifier: Apache-2.0

#include "jcore/interpreter.hpp"

#include <algorithm>

namespace jcore {

namespace {

Bottom bottom(BottomReason r, std::string detail, const Span& span) {
  return Bottom{r, std::move(detail), span};
}

std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) +
                                   static_cast<std::uint64_t>(b));
}

std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) -
                                   static_cast<std::uint64_t>(b));
}

// Non-negative remainder for positive divisors; x mod 0 = x.
std::int64_t modulo(std::int64_t a, std::int64_t b) {
  if (b == 0) return a;
  if (b == -1) return 0;
  std::int64_t r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) r += b;
  return r;
}

const char* kind_label(Stmt::Kind k) {
  switch (k) {
    case Stmt::Kind::Assign: return "assign";
    case Stmt::Kind::FieldAssign: return "field-assign";
    case Stmt::Kind::New: return "new";
    case Stmt::Kind::Call: return "call";
    case Stmt::Kind::SuperCall: return "super-call";
    case Stmt::Kind::Local: return "local";
    case Stmt::Kind::If: return "if";
    case Stmt::Kind::Seq: return "seq";
    case Stmt::Kind::Skip: return "skip";
    case Stmt::Kind::Abort: return "abort";
    case Stmt::Kind::While: return "while";
  }
  return "?";
}

// Records atomic commands; forwards everything to an inner observer.
class TraceObserver : public ExecObserver {
 public:
  TraceObserver(std::vector<std::string>& out, ExecObserver* inner)
      : out_(out), inner_(inner) {}

  void after_command(const std::string& cls, const std::string& method,
                     const Stmt& s, const Heap& h,
                     const Store& st) override {
    if (s.kind != Stmt::Kind::Seq && s.kind != Stmt::Kind::Local &&
        s.kind != Stmt::Kind::If && s.kind != Stmt::Kind::While) {
      out_.push_back(s.span.str() + " " + cls + "." + method + " " +
                     kind_label(s.kind) + " " +
                     state_digest(GlobalState{h, st}));
    }
    if (inner_) inner_->after_command(cls, method, s, h, st);
  }
  void on_call(const CallEvent& ev) override {
    if (inner_) inner_->on_call(ev);
  }
  void on_return(const ReturnEvent& ev) override {
    if (inner_) inner_->on_return(ev);
  }
  bool wants_pre_heap() const override {
    return inner_ && inner_->wants_pre_heap();
  }

 private:
  std::vector<std::string>& out_;
  ExecObserver* inner_;
};

}  // namespace

Interpreter::Interpreter(const ClassTable& ct, Allocator alloc,
                         ExecObserver* observer, int loop_cap)
    : ct_(ct),
      alloc_(alloc ? std::move(alloc) : Allocator(fresh)),
      observer_(observer),
      loop_cap_(loop_cap) {}

Outcome<Value> Interpreter::eval(const Heap& h, const Store& s,
                                 const Expr& e) const {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::Var: {
      auto it = s.find(e.name);
      if (it == s.end()) return Value::nil();
      return it->second;
    }
    case K::Null: return Value::nil();
    case K::True: return Value::boolean(true);
    case K::False: return Value::boolean(false);
    case K::UnitLit: return Value::unit();
    case K::IntLit: return Value::integer(e.value);
    case K::Field: {
      auto r = eval(h, s, e.kids[0]);
      if (!r.ok()) return r;
      if (!r.value().is_loc()) {
        return bottom(BottomReason::NilDeref, "read of field " + e.name,
                      e.span);
      }
      auto obj = h.find(r.value().loc);
      if (obj == h.end()) {
        return bottom(BottomReason::NilDeref, "dangling " + r.value().str(),
                      e.span);
      }
      auto f = obj->second.find(e.name);
      if (f == obj->second.end()) {
        return bottom(BottomReason::NilDeref, "missing field " + e.name,
                      e.span);
      }
      return f->second;
    }
    case K::Eq: {
      auto l = eval(h, s, e.kids[0]);
      if (!l.ok()) return l;
      auto r = eval(h, s, e.kids[1]);
      if (!r.ok()) return r;
      return Value::boolean(l.value() == r.value());
    }
    case K::Not: {
      auto v = eval(h, s, e.kids[0]);
      if (!v.ok()) return v;
      return Value::boolean(!v.value().truthy());
    }
    case K::Cast:
    case K::Is: {
      auto v = eval(h, s, e.kids[0]);
      if (!v.ok()) return v;
      const Value& d = v.value();
      bool fits = d.is_loc() && ct_.is_subclass(d.loc.cls, e.name);
      if (e.kind == K::Is) return Value::boolean(fits);
      if (d.kind == Value::Kind::Nil || fits) return d;
      return bottom(BottomReason::CastFailure,
                    d.str() + " is not a " + e.name, e.span);
    }
    case K::Add:
    case K::Sub:
    case K::Mod:
    case K::Lt: {
      auto l = eval(h, s, e.kids[0]);
      if (!l.ok()) return l;
      auto r = eval(h, s, e.kids[1]);
      if (!r.ok()) return r;
      std::int64_t a = l.value().num;
      std::int64_t b = r.value().num;
      if (e.kind == K::Add) return Value::integer(wrap_add(a, b));
      if (e.kind == K::Sub) return Value::integer(wrap_sub(a, b));
      if (e.kind == K::Mod) return Value::integer(modulo(a, b));
      return Value::boolean(a < b);
    }
    case K::Call:
    case K::SuperCall:
    case K::New: break;
  }
  return bottom(BottomReason::ExplicitAbort, "surface expression in core",
                e.span);
}

std::optional<Bottom> Interpreter::allocate(const std::string& cls, Heap& h,
                                            Location& out) const {
  out = alloc_(cls, h);
  ObjectState obj;
  for (const FieldDecl& fd : ct_.fields(cls)) {
    obj[fd.name] = default_value(fd.type);
  }
  h[out] = std::move(obj);
  return construct_in_place(cls, h, out);
}

std::optional<Bottom> Interpreter::construct_in_place(const std::string& cls,
                                                      Heap& h,
                                                      const Location& l) const {
  std::vector<std::string> chain;
  for (std::string c = cls; c != kRootClass && ct_.is_declared(c);
       c = ct_.super(c).value_or(kRootClass)) {
    chain.push_back(c);
  }
  std::reverse(chain.begin(), chain.end());
  for (const std::string& c : chain) {
    const ClassDecl* d = ct_.decl(c);
    Store st{{"self", Value::location(l)}};
    if (auto b = run(0, Frame{c, "con"}, d->constructor, h, st)) return b;
  }
  return std::nullopt;
}

std::optional<Bottom> Interpreter::call(int fuel, const Frame& f,
                                        const std::string& at,
                                        const Location& self,
                                        const std::string& m,
                                        std::vector<Value> args, Heap& h,
                                        Value& out, const Span& span) const {
  if (fuel <= 0) {
    return bottom(BottomReason::FuelExhausted, "call of " + m, span);
  }
  auto rm = ct_.resolve_method(m, at);
  if (!rm) {
    return bottom(BottomReason::ExplicitAbort, "no method " + m + " in " + at,
                  span);
  }
  const MethodDecl& md = *rm->decl;
  Store callee;
  for (std::size_t i = 0; i < md.params.size() && i < args.size(); ++i) {
    callee[md.params[i].name] = std::move(args[i]);
  }
  callee["self"] = Value::location(self);
  callee["result"] = default_value(md.ret);

  std::optional<Heap> pre;
  Store initial;
  if (observer_) {
    initial = callee;
    CallEvent ev{at, m, f.cls, self, &initial, &h, span};
    observer_->on_call(ev);
    if (observer_->wants_pre_heap()) pre = h;
  }
  if (auto b = run(fuel - 1, Frame{rm->declaring->name, m}, md.body, h,
                   callee)) {
    return b;
  }
  out = callee["result"];
  if (observer_) {
    ReturnEvent ev{at,      m,   f.cls, self, &initial, pre ? &*pre : nullptr,
                   &h,      out, span};
    observer_->on_return(ev);
  }
  return std::nullopt;
}

std::optional<Bottom> Interpreter::run(int fuel, const Frame& f, const Stmt& s,
                                       Heap& h, Store& st) const {
  using K = Stmt::Kind;
  switch (s.kind) {
    case K::Skip: break;
    case K::Abort:
      return bottom(BottomReason::ExplicitAbort, "abort", s.span);
    case K::Assign: {
      auto v = eval(h, st, s.exprs[0]);
      if (!v.ok()) return v.bottom();
      st[s.var] = v.value();
      break;
    }
    case K::FieldAssign: {
      auto r = eval(h, st, s.exprs[0]);
      if (!r.ok()) return r.bottom();
      auto v = eval(h, st, s.exprs[1]);
      if (!v.ok()) return v.bottom();
      if (!r.value().is_loc() || !h.count(r.value().loc)) {
        return bottom(BottomReason::NilDeref, "write of field " + s.name,
                      s.span);
      }
      h[r.value().loc][s.name] = v.value();
      break;
    }
    case K::New: {
      Location l;
      if (auto b = allocate(s.name, h, l)) return b;
      st[s.var] = Value::location(l);
      break;
    }
    case K::Call:
    case K::SuperCall: {
      std::vector<Value> args;
      Location self;
      std::string at;
      std::size_t first = 0;
      if (s.kind == K::Call) {
        auto r = eval(h, st, s.exprs[0]);
        if (!r.ok()) return r.bottom();
        if (!r.value().is_loc()) {
          return bottom(BottomReason::NilDeref, "call of " + s.name + " on nil",
                        s.span);
        }
        self = r.value().loc;
        at = self.cls;
        first = 1;
      } else {
        auto me = st.find("self");
        if (me == st.end() || !me->second.is_loc()) {
          return bottom(BottomReason::NilDeref, "super call without self",
                        s.span);
        }
        self = me->second.loc;
        at = ct_.super(f.cls).value_or(kRootClass);
      }
      for (std::size_t i = first; i < s.exprs.size(); ++i) {
        auto v = eval(h, st, s.exprs[i]);
        if (!v.ok()) return v.bottom();
        args.push_back(v.value());
      }
      Value out;
      if (auto b = call(fuel, f, at, self, s.name, std::move(args), h, out,
                        s.span)) {
        return b;
      }
      st[s.var] = out;
      break;
    }
    case K::Local: {
      auto v = eval(h, st, s.exprs[0]);
      if (!v.ok()) return v.bottom();
      std::optional<Value> shadowed;
      if (auto it = st.find(s.var); it != st.end()) shadowed = it->second;
      st[s.var] = v.value();
      if (auto b = run(fuel, f, s.body[0], h, st)) return b;
      if (shadowed) {
        st[s.var] = *shadowed;
      } else {
        st.erase(s.var);
      }
      break;
    }
    case K::If: {
      auto g = eval(h, st, s.exprs[0]);
      if (!g.ok()) return g.bottom();
      const Stmt& branch = g.value().truthy() ? s.body[0] : s.body[1];
      if (auto b = run(fuel, f, branch, h, st)) return b;
      break;
    }
    case K::Seq:
      for (const Stmt& c : s.body) {
        if (auto b = run(fuel, f, c, h, st)) return b;
      }
      break;
    case K::While: {
      for (int iter = 0;; ++iter) {
        auto g = eval(h, st, s.exprs[0]);
        if (!g.ok()) return g.bottom();
        if (!g.value().truthy()) break;
        if (iter >= loop_cap_) {
          return bottom(BottomReason::FuelExhausted, "loop cap reached",
                        s.span);
        }
        if (auto b = run(fuel, f, s.body[0], h, st)) return b;
      }
      break;
    }
  }
  if (observer_) observer_->after_command(f.cls, f.method, s, h, st);
  return std::nullopt;
}

Outcome<GlobalState> Interpreter::exec(int fuel, const std::string& cls,
                                       const Stmt& s, GlobalState st,
                                       const std::string& method) const {
  if (auto b = run(fuel, Frame{cls, method}, s, st.heap, st.store)) return *b;
  return st;
}

Outcome<Heap> Interpreter::construct(const std::string& cls, Heap h,
                                     const Location& l) const {
  if (auto b = construct_in_place(cls, h, l)) return *b;
  return h;
}

Outcome<std::pair<Heap, Location>> Interpreter::new_object(
    const std::string& cls, Heap h) const {
  Location l;
  if (auto b = allocate(cls, h, l)) return *b;
  return std::pair<Heap, Location>{std::move(h), l};
}

Outcome<std::pair<Heap, Value>> Interpreter::invoke(
    int fuel, const Location& l, const std::string& m,
    const std::vector<Value>& args, Heap h) const {
  return invoke_at(fuel, l.cls, l, m, args, std::move(h));
}

Outcome<std::pair<Heap, Value>> Interpreter::invoke_at(
    int fuel, const std::string& at, const Location& l, const std::string& m,
    const std::vector<Value>& args, Heap h) const {
  Value out;
  if (auto b = call(fuel, Frame{"", ""}, at, l, m, args, h, out, Span{})) {
    return *b;
  }
  return std::pair<Heap, Value>{std::move(h), out};
}

std::vector<int> fuel_schedule(int max_fuel) {
  std::vector<int> out;
  for (int j = 1; j < max_fuel; j *= 2) out.push_back(j);
  if (max_fuel >= 1) out.push_back(max_fuel);
  return out;
}

RunResult run(const ClassTable& ct, const std::string& entry_class,
              const std::string& entry_method, const RunOptions& options) {
  if (!ct.is_declared(entry_class) || entry_class == kRootClass) {
    throw EntryClassError("entry class " + entry_class + " is not declared");
  }
  if (ct.role_of_class(entry_class) != Role::Client) {
    throw EntryClassError("entry class " + entry_class + " is a " +
                          role_name(ct.role_of_class(entry_class)) +
                          " class; entries must be clients");
  }
  auto rm = ct.resolve_method(entry_method, entry_class);
  if (!rm || !rm->decl->params.empty()) {
    throw EntryClassError("entry method " + entry_class + "." + entry_method +
                          " must exist and take no arguments");
  }

  RunResult result;
  std::vector<std::string> trace;
  TraceObserver tracer(trace, options.observer);
  ExecObserver* obs = options.trace ? &tracer : options.observer;
  Interpreter in(ct, options.alloc, obs, options.budget.loop_cap);

  std::vector<int> schedule = options.fixed_fuel
                                  ? std::vector<int>{*options.fixed_fuel}
                                  : fuel_schedule(options.budget.max_fuel);
  for (int fuel : schedule) {
    trace.clear();
    auto built = in.new_object(entry_class, Heap{});
    result.fuel = fuel;
    if (!built.ok()) {
      result.outcome = built.bottom();
      break;
    }
    GlobalState st{std::move(built.value().first),
                   {{"self", Value::location(built.value().second)},
                    {"result", default_value(rm->decl->ret)}}};
    result.outcome = in.exec(fuel, rm->declaring->name, rm->decl->body,
                             std::move(st), entry_method);
    if (!result.outcome.fuel_exhausted()) break;
  }
  result.trace = std::move(trace);
  return result;
}

}  // namespace jcore
