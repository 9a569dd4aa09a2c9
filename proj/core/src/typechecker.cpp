// SPDX-License-Identifier: Apache-2.0

#include "jcore/typechecker.hpp"

#include <optional>

namespace jcore {

namespace {

class Checker {
 public:
  Checker(const ClassTable& ct, std::vector<Diagnostic>& out,
          std::string cls = {}, std::string method = {}, std::string file = {})
      : ct_(ct),
        out_(out),
        cls_(std::move(cls)),
        method_(std::move(method)),
        file_(std::move(file)) {}

  bool in_constructor = false;

  void error(std::string rule, std::string msg, const Span& span) {
    out_.push_back({std::move(rule), std::move(msg), span, file_, cls_, method_});
  }

  std::optional<Type> expr(const TypingContext& g, const Expr& e) {
    using K = Expr::Kind;
    switch (e.kind) {
      case K::Var: {
        auto it = g.find(e.name);
        if (it == g.end()) {
          error("UndeclaredVariable", "variable " + e.name + " is not in scope",
                e.span);
          return std::nullopt;
        }
        return it->second;
      }
      case K::Null: return Type::null();
      case K::True:
      case K::False: return Type::boolean();
      case K::UnitLit: return Type::unit();
      case K::IntLit: return Type::integer();
      case K::Field: {
        auto r = expr(g, e.kids[0]);
        if (!r) return std::nullopt;
        auto ft = field_access(g, *r, e.name, e.span);
        return ft;
      }
      case K::Eq: {
        auto l = expr(g, e.kids[0]);
        auto r = expr(g, e.kids[1]);
        if (!l || !r) return std::nullopt;
        return Type::boolean();
      }
      case K::Not: {
        auto t = expr(g, e.kids[0]);
        if (!t) return std::nullopt;
        if (!(*t == Type::boolean())) {
          error("TypeMismatch", "operand of ! must be bool, found " + t->str(),
                e.span);
          return std::nullopt;
        }
        return Type::boolean();
      }
      case K::Cast:
      case K::Is: {
        auto d = expr(g, e.kids[0]);
        if (!d) return std::nullopt;
        Type b = Type::cls(e.name);
        bool ok = ct_.is_declared(e.name) &&
                  (d->kind == Type::Kind::Null || ct_.subtype(b, *d));
        if (!ok) {
          error("BadCastTarget",
                e.name + " is not a subclass of " + d->str(), e.span);
          return std::nullopt;
        }
        return e.kind == K::Cast ? b : Type::boolean();
      }
      case K::Add:
      case K::Sub:
      case K::Mod:
      case K::Lt: {
        auto l = expr(g, e.kids[0]);
        auto r = expr(g, e.kids[1]);
        if (!l || !r) return std::nullopt;
        if (!(*l == Type::integer()) || !(*r == Type::integer())) {
          error("TypeMismatch",
                "arithmetic on " + l->str() + " and " + r->str(), e.span);
          return std::nullopt;
        }
        return e.kind == K::Lt ? Type::boolean() : Type::integer();
      }
      case K::Call:
      case K::SuperCall:
      case K::New:
        error("SurfaceFormInCore", "expression was not desugared", e.span);
        return std::nullopt;
    }
    return std::nullopt;
  }

  // Fields are private to the declaring class; the receiver may be any
  // subclass of it.
  std::optional<Type> field_access(const TypingContext& g, const Type& recv,
                                   const std::string& f, const Span& span) {
    const Type& self_t = g.at("self");
    for (const FieldDecl& fd : ct_.dfields(self_t.name)) {
      if (fd.name == f) {
        if (!ct_.subtype(recv, self_t)) {
          error("PrivateFieldAccess",
                "field " + f + " of " + self_t.name +
                    " accessed through receiver of type " + recv.str(),
                span);
          return std::nullopt;
        }
        return fd.type;
      }
    }
    if (recv.is_class() && ct_.field_type(recv.name, f)) {
      error("PrivateFieldAccess",
            "field " + f + " is private to its declaring class", span);
    } else {
      error("UnknownField", "no field " + f + " visible in " + self_t.name,
            span);
    }
    return std::nullopt;
  }

  void assignable(const TypingContext& g, const std::string& x,
                  const Type& t, const Span& span) {
    if (x == "self") {
      error("SelfAssignment", "self is not assignable", span);
      return;
    }
    auto it = g.find(x);
    if (it == g.end()) {
      error("UndeclaredVariable", "variable " + x + " is not in scope", span);
      return;
    }
    if (!ct_.subtype(t, it->second)) {
      error("TypeMismatch",
            "cannot assign " + t.str() + " to " + x + " of type " +
                it->second.str(),
            span);
    }
  }

  void call(const TypingContext& g, const Stmt& s, const std::string& cls,
            const std::vector<Expr>& args) {
    if (in_constructor) {
      error("CallInConstructor", "constructors may not call methods", s.span);
      return;
    }
    auto sig = ct_.mtype(s.name, cls);
    if (!sig) {
      error("UnknownMethod", "no method " + s.name + " in " + cls, s.span);
      return;
    }
    if (sig->params.size() != args.size()) {
      error("ArityMismatch",
            s.name + " expects " + std::to_string(sig->params.size()) +
                " arguments",
            s.span);
      return;
    }
    for (size_t i = 0; i < args.size(); ++i) {
      auto t = expr(g, args[i]);
      if (t && !ct_.subtype(*t, sig->params[i])) {
        error("TypeMismatch",
              "argument " + std::to_string(i + 1) + " of " + s.name + " has type " +
                  t->str() + ", expected " + sig->params[i].str(),
              args[i].span);
      }
    }
    if (ct_.has_designations() && ct_.mscope(s.name, cls)) {
      const std::string& self_c = g.at("self").name;
      if (ct_.role_of_class(self_c) == Role::Client) {
        error("ModuleScopeViolation",
              s.name + " has module scope and is called from " + self_c,
              s.span);
      }
    }
    assignable(g, s.var, sig->ret, s.span);
  }

  void cmd(const TypingContext& g, const Stmt& s) {
    using K = Stmt::Kind;
    switch (s.kind) {
      case K::Skip:
      case K::Abort: return;
      case K::Assign: {
        auto t = expr(g, s.exprs[0]);
        if (t) assignable(g, s.var, *t, s.span);
        return;
      }
      case K::FieldAssign: {
        auto r = expr(g, s.exprs[0]);
        auto u = expr(g, s.exprs[1]);
        if (!r) return;
        auto ft = field_access(g, *r, s.name, s.span);
        if (ft && u && !ct_.subtype(*u, *ft)) {
          error("TypeMismatch",
                "cannot store " + u->str() + " in field " + s.name + " of type " +
                    ft->str(),
                s.span);
        }
        return;
      }
      case K::New: {
        if (s.name == kRootClass) {
          error("InstantiateObject", "the root class cannot be instantiated",
                s.span);
          return;
        }
        assignable(g, s.var, Type::cls(s.name), s.span);
        return;
      }
      case K::Call: {
        if (s.var.empty()) {
          error("SurfaceFormInCore", "call statement was not desugared", s.span);
          return;
        }
        auto d = expr(g, s.exprs[0]);
        if (!d) return;
        if (!d->is_class()) {
          error("TypeMismatch", "receiver of " + s.name + " has type " + d->str(),
                s.span);
          return;
        }
        call(g, s, d->name, {s.exprs.begin() + 1, s.exprs.end()});
        return;
      }
      case K::SuperCall: {
        if (s.var.empty()) {
          error("SurfaceFormInCore", "call statement was not desugared", s.span);
          return;
        }
        auto sup = ct_.super(g.at("self").name);
        call(g, s, sup.value_or(kRootClass), s.exprs);
        return;
      }
      case K::Local: {
        if (s.var == "self") {
          error("SelfAssignment", "self cannot be redeclared", s.span);
          return;
        }
        auto u = expr(g, s.exprs[0]);
        if (u && !ct_.subtype(*u, s.type)) {
          error("TypeMismatch",
                "cannot initialize " + s.var + " of type " + s.type.str() +
                    " with " + u->str(),
                s.span);
        }
        TypingContext inner = g;
        inner[s.var] = s.type;
        cmd(inner, s.body[0]);
        return;
      }
      case K::If:
      case K::While: {
        auto t = expr(g, s.exprs[0]);
        if (t && !(*t == Type::boolean())) {
          error("TypeMismatch", "guard must be bool, found " + t->str(),
                s.exprs[0].span);
        }
        for (const Stmt& b : s.body) cmd(g, b);
        return;
      }
      case K::Seq:
        for (const Stmt& b : s.body) cmd(g, b);
        return;
    }
  }

 private:
  const ClassTable& ct_;
  std::vector<Diagnostic>& out_;
  std::string cls_;
  std::string method_;
  std::string file_;
};

}  // namespace

TypeResult type_of_expr(const ClassTable& ct, const TypingContext& gamma,
                        const Expr& e) {
  std::vector<Diagnostic> errs;
  Checker c(ct, errs);
  auto t = c.expr(gamma, e);
  if (t) return *t;
  if (errs.empty()) {
    errs.push_back({"TypeMismatch", "ill-typed expression", e.span, {}, {}, {}});
  }
  return errs.front();
}

std::vector<Diagnostic> check_command(const ClassTable& ct,
                                      const TypingContext& gamma,
                                      const Stmt& s) {
  std::vector<Diagnostic> errs;
  Checker c(ct, errs);
  c.cmd(gamma, s);
  return errs;
}

TypingContext method_context(const ClassTable& ct, const std::string& cls,
                             const MethodDecl& m) {
  (void)ct;
  TypingContext g{{"self", Type::cls(cls)}, {"result", m.ret}};
  for (const Param& p : m.params) g[p.name] = p.type;
  return g;
}

Report check_table(const ClassTable& ct) {
  Report r;
  for (const ClassDecl& c : ct.decls()) {
    {
      Checker k(ct, r.diagnostics, c.name, "con", c.file);
      k.in_constructor = true;
      k.cmd({{"self", Type::cls(c.name)}}, c.constructor);
    }
    for (const MethodDecl& m : c.methods) {
      Checker k(ct, r.diagnostics, c.name, m.name, c.file);
      auto above = ct.resolve_method(m.name, c.super_name);
      if (above) {
        auto mine = ct.mtype(m.name, c.name);
        auto theirs = ct.mtype(m.name, c.super_name);
        if (!(*mine == *theirs)) {
          k.error("InvalidOverride",
                  c.name + "." + m.name + " changes the signature " +
                      theirs->str() + " to " + mine->str(),
                  m.span);
        } else if (*ct.pars(m.name, c.name) != *ct.pars(m.name, c.super_name)) {
          k.error("InvalidOverride",
                  c.name + "." + m.name + " renames parameters of " +
                      above->declaring->name + "." + m.name,
                  m.span);
        }
      }
      k.cmd(method_context(ct, c.name, m), m.body);
    }
  }
  return r;
}

}  // namespace jcore
