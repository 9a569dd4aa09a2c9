// SPDX-License-Identifier: Apache-2.0
//
// Removes call statements, `new` outside `x := new C`, and calls nested in
// expressions. Calls are hoisted into `$tmpN` locals in evaluation order:
// receiver first, then arguments left to right.

#include <map>
#include <optional>

#include "jcore/parser.hpp"

namespace jcore {

namespace {

// Signature index over the program's own declarations; lenient, since the
// typechecker runs afterwards.
class Signatures {
 public:
  explicit Signatures(const std::vector<ClassDecl>& classes) {
    for (const ClassDecl& c : classes) by_name_[c.name] = &c;
  }

  const ClassDecl* find(const std::string& c) const {
    auto it = by_name_.find(c);
    return it == by_name_.end() ? nullptr : it->second;
  }

  std::optional<Type> field(const std::string& c, const std::string& f) const {
    size_t guard = 0;
    for (const ClassDecl* d = find(c); d && guard <= by_name_.size();
         d = find(d->super_name), ++guard) {
      for (const FieldDecl& fd : d->fields) {
        if (fd.name == f) return fd.type;
      }
    }
    return std::nullopt;
  }

  const MethodDecl* method(const std::string& c, const std::string& m) const {
    size_t guard = 0;
    for (const ClassDecl* d = find(c); d && guard <= by_name_.size();
         d = find(d->super_name), ++guard) {
      if (const MethodDecl* md = d->find_method(m)) return md;
    }
    return nullptr;
  }

 private:
  std::map<std::string, const ClassDecl*> by_name_;
};

struct Hoisted {
  std::string var;
  Type type;
  Stmt stmt;
};

class Desugarer {
 public:
  Desugarer(const Signatures& sigs, const ClassDecl& cls)
      : sigs_(sigs), cls_(cls) {}

  Stmt body(const Stmt& s, TypingContext gamma) {
    counter_ = 0;
    return stmt(s, gamma);
  }

 private:
  [[noreturn]] void fail(const std::string& msg, const Span& span) const {
    throw DesugarError(msg, span, cls_.file);
  }

  std::string fresh() { return "$tmp" + std::to_string(counter_++); }

  Type type_of(const Expr& e, const TypingContext& g) const {
    using K = Expr::Kind;
    switch (e.kind) {
      case K::Var: {
        auto it = g.find(e.name);
        if (it == g.end()) fail("undeclared variable " + e.name, e.span);
        return it->second;
      }
      case K::Null: return Type::null();
      case K::True:
      case K::False:
      case K::Eq:
      case K::Not:
      case K::Is:
      case K::Lt: return Type::boolean();
      case K::UnitLit: return Type::unit();
      case K::IntLit:
      case K::Add:
      case K::Sub:
      case K::Mod: return Type::integer();
      case K::Cast:
      case K::New: return Type::cls(e.name);
      case K::Field: {
        Type r = type_of(e.kids[0], g);
        auto f = r.is_class() ? sigs_.field(r.name, e.name) : std::nullopt;
        if (!f) fail("unknown field " + e.name, e.span);
        return *f;
      }
      case K::Call: {
        Type r = type_of(e.kids[0], g);
        const MethodDecl* m =
            r.is_class() ? sigs_.method(r.name, e.name) : nullptr;
        if (m == nullptr) fail("unknown method " + e.name, e.span);
        return m->ret;
      }
      case K::SuperCall: {
        const MethodDecl* m = sigs_.method(cls_.super_name, e.name);
        if (m == nullptr) fail("unknown super method " + e.name, e.span);
        return m->ret;
      }
    }
    return Type::unit();
  }

  // Replaces calls and `new` inside e by temporaries, appending them in
  // evaluation order.
  Expr hoist(const Expr& e, TypingContext& g, std::vector<Hoisted>& out) {
    using K = Expr::Kind;
    if (e.kind == K::Call || e.kind == K::SuperCall) {
      Stmt call;
      call.kind = e.kind == K::Call ? Stmt::Kind::Call : Stmt::Kind::SuperCall;
      call.name = e.name;
      call.span = e.span;
      for (const Expr& k : e.kids) call.exprs.push_back(hoist(k, g, out));
      Type t = type_of(e, g);
      return bind(std::move(call), t, e.span, g, out);
    }
    if (e.kind == K::New) {
      Stmt n;
      n.kind = Stmt::Kind::New;
      n.name = e.name;
      n.span = e.span;
      return bind(std::move(n), Type::cls(e.name), e.span, g, out);
    }
    Expr copy = e;
    for (Expr& k : copy.kids) k = hoist(k, g, out);
    return copy;
  }

  Expr bind(Stmt s, Type t, const Span& span, TypingContext& g,
            std::vector<Hoisted>& out) {
    std::string v = fresh();
    s.var = v;
    g[v] = t;
    out.push_back({v, t, std::move(s)});
    return Expr::var(v, span);
  }

  static Stmt wrap(std::vector<Hoisted> hs, Stmt inner) {
    for (auto it = hs.rbegin(); it != hs.rend(); ++it) {
      Stmt local;
      local.kind = Stmt::Kind::Local;
      local.var = it->var;
      local.type = it->type;
      local.span = it->stmt.span;
      local.exprs.push_back(Expr::lit_default(it->type));
      Span span = it->stmt.span;
      if (inner.kind == Stmt::Kind::Skip) {
        local.body.push_back(std::move(it->stmt));
      } else {
        local.body.push_back(
            Stmt::seq({std::move(it->stmt), std::move(inner)}, span));
      }
      inner = std::move(local);
    }
    return inner;
  }

  Stmt call_stmt(const Stmt& s, TypingContext g) {
    std::vector<Hoisted> hs;
    Stmt c = s;
    for (Expr& e : c.exprs) e = hoist(e, g, hs);
    if (c.var.empty()) {
      Expr probe;
      probe.kind =
          s.kind == Stmt::Kind::Call ? Expr::Kind::Call : Expr::Kind::SuperCall;
      probe.name = s.name;
      probe.kids = c.exprs;
      probe.span = s.span;
      Type t = type_of(probe, g);
      bind(std::move(c), t, s.span, g, hs);
      return wrap(std::move(hs), Stmt::skip(s.span));
    }
    return wrap(std::move(hs), std::move(c));
  }

  Stmt stmt(const Stmt& s, TypingContext g) {
    using K = Stmt::Kind;
    switch (s.kind) {
      case K::Skip:
      case K::Abort:
      case K::New: return s;
      case K::Call:
      case K::SuperCall: return call_stmt(s, std::move(g));
      case K::Assign:
      case K::FieldAssign: {
        std::vector<Hoisted> hs;
        Stmt c = s;
        for (Expr& e : c.exprs) e = hoist(e, g, hs);
        return wrap(std::move(hs), std::move(c));
      }
      case K::Local: {
        std::vector<Hoisted> hs;
        const Expr& init = s.exprs[0];
        using EK = Expr::Kind;
        if (init.kind == EK::Call || init.kind == EK::SuperCall ||
            init.kind == EK::New) {
          Stmt into;
          into.span = init.span;
          into.var = s.var;
          into.name = init.name;
          if (init.kind == EK::New) {
            into.kind = K::New;
          } else {
            into.kind = init.kind == EK::Call ? K::Call : K::SuperCall;
            for (const Expr& k : init.kids) into.exprs.push_back(hoist(k, g, hs));
          }
          TypingContext inner = g;
          inner[s.var] = s.type;
          Stmt local;
          local.kind = K::Local;
          local.var = s.var;
          local.type = s.type;
          local.span = s.span;
          local.exprs.push_back(Expr::lit_default(s.type));
          local.body.push_back(
              Stmt::seq({std::move(into), stmt(s.body[0], inner)}, s.span));
          return wrap(std::move(hs), std::move(local));
        }
        Stmt c = s;
        c.exprs[0] = hoist(init, g, hs);
        TypingContext inner = g;
        inner[s.var] = s.type;
        c.body[0] = stmt(s.body[0], inner);
        return wrap(std::move(hs), std::move(c));
      }
      case K::If: {
        std::vector<Hoisted> hs;
        Stmt c = s;
        c.exprs[0] = hoist(s.exprs[0], g, hs);
        c.body[0] = stmt(s.body[0], g);
        c.body[1] = stmt(s.body[1], g);
        return wrap(std::move(hs), std::move(c));
      }
      case K::Seq: {
        Stmt c = s;
        for (Stmt& b : c.body) b = stmt(b, g);
        return c;
      }
      case K::While: {
        std::vector<Hoisted> hs;
        Stmt c = s;
        c.exprs[0] = hoist(s.exprs[0], g, hs);
        Stmt body = stmt(s.body[0], g);
        if (!hs.empty()) {
          std::vector<Stmt> items{std::move(body)};
          for (const Hoisted& h : hs) items.push_back(h.stmt);
          body = Stmt::seq(std::move(items), s.span);
        }
        c.body[0] = std::move(body);
        return wrap(std::move(hs), std::move(c));
      }
    }
    return s;
  }

  const Signatures& sigs_;
  const ClassDecl& cls_;
  int counter_ = 0;
};

}  // namespace

std::vector<ClassDecl> desugar(const std::vector<ClassDecl>& classes) {
  Signatures sigs(classes);
  std::vector<ClassDecl> out;
  for (const ClassDecl& c : classes) {
    ClassDecl d = c;
    Desugarer ds(sigs, c);
    d.constructor = ds.body(c.constructor, {{"self", Type::cls(c.name)}});
    for (MethodDecl& m : d.methods) {
      TypingContext g{{"self", Type::cls(c.name)}, {"result", m.ret}};
      for (const Param& p : m.params) g[p.name] = p.type;
      m.body = ds.body(m.body, std::move(g));
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<ClassDecl> desugar(const SurfaceProgram& program) {
  return desugar(program.classes);
}

}  // namespace jcore
