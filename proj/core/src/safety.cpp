// SPDX-License-Identifier: Apache-2.0

#include "jcore/safety.hpp"

#include <algorithm>

#include "jcore/typechecker.hpp"

namespace jcore {

namespace {

bool is_self(const Expr& e) {
  return e.kind == Expr::Kind::Var && e.name == "self";
}

class Analyzer {
 public:
  Analyzer(const ClassTable& ct, std::vector<Diagnostic>& out,
           std::string cls = {}, std::string method = {},
           std::string file = {})
      : ct_(ct),
        out_(out),
        cls_(std::move(cls)),
        method_(std::move(method)),
        file_(std::move(file)) {}

  void flag(const char* rule, std::string msg, const Span& span) {
    out_.push_back({rule, std::move(msg), span, file_, cls_, method_});
  }

  std::optional<Type> type(const TypingContext& g, const Expr& e) {
    auto t = type_of_expr(ct_, g, e);
    if (auto* ok = std::get_if<Type>(&t)) return *ok;
    return std::nullopt;
  }

  bool le_own(const std::string& c) const {
    return ct_.has_designations() &&
           ct_.is_subclass(c, ct_.designations().own);
  }
  bool le_rep(const std::string& c) const { return ct_.is_rep_class(c); }

  // Shared by field access and field update: T is the field type or the
  // stored value's type.
  void private_access(const TypingContext& g, const Expr& recv,
                      const Type& t, const std::string& f, const Span& span) {
    if (!ct_.has_designations()) return;
    const std::string& c = g.at("self").name;
    const std::string& own = ct_.designations().own;
    if (!ct_.comparable_to_rep(t)) return;
    if (c == own && !is_self(recv)) {
      flag(kNonSelfPrivateAccess,
           "field " + f + " of rep-comparable type " + t.str() +
               " used through a receiver other than self",
           span);
    } else if (c != own && ct_.is_subclass(c, own)) {
      flag(kSubOwnerRepAccess,
           "sub-owner " + c + " uses field " + f + " of rep-comparable type " +
               t.str(),
           span);
    }
  }

  void expr(const TypingContext& g, const Expr& e) {
    for (const Expr& k : e.kids) expr(g, k);
    if (e.kind != Expr::Kind::Field) return;
    auto t = type(g, e);
    if (t) private_access(g, e.kids[0], *t, e.name, e.span);
  }

  void call(const TypingContext& g, const Stmt& s, const std::string& d,
            const Expr* recv, const std::vector<Expr>& args) {
    for (const Expr& a : args) expr(g, a);
    if (recv) expr(g, *recv);
    if (!ct_.has_designations()) return;
    auto sig = ct_.mtype(s.name, d);
    if (!sig) return;
    const std::string& c = g.at("self").name;
    bool c_own = le_own(c);
    bool c_rep = le_rep(c);
    if (recv && ct_.mscope(s.name, d) && !c_own && !c_rep) {
      flag(kModuleScopeViolation,
           s.name + " has module scope and is called from client " + c,
           s.span);
    }
    if (!recv) return;  // super calls carry no extra conditions
    Type dt = Type::cls(d);
    auto any_param_rep = [&] {
      return std::any_of(sig->params.begin(), sig->params.end(),
                         [&](const Type& t) { return ct_.comparable_to_rep(t); });
    };
    if ((c_own || c_rep) && !le_rep(d) && !le_own(d) && any_param_rep()) {
      flag(kRepLeakViaCall,
           "client method " + d + "." + s.name +
               " has a parameter comparable to the rep class",
           s.span);
    }
    if (c_own && ct_.comparable_to_own(dt) && !is_self(*recv) &&
        any_param_rep()) {
      flag(kRepArgToForeignOwner,
           "owner method " + s.name +
               " with rep-comparable parameters called on a receiver other "
               "than self",
           s.span);
    }
    if (c_own && ct_.comparable_to_rep(dt)) {
      for (std::size_t i = 0; i < args.size() && i < sig->params.size(); ++i) {
        if (!is_self(args[i]) && ct_.comparable_to_own(sig->params[i])) {
          flag(kOwnerArgToRep,
               "argument " + std::to_string(i + 1) + " of rep method " +
                   s.name + " has owner-comparable type " +
                   sig->params[i].str(),
               args[i].span);
        }
      }
    }
  }

  void cmd(const TypingContext& g, const Stmt& s) {
    using K = Stmt::Kind;
    switch (s.kind) {
      case K::Skip:
      case K::Abort: return;
      case K::Assign: expr(g, s.exprs[0]); return;
      case K::FieldAssign: {
        expr(g, s.exprs[0]);
        expr(g, s.exprs[1]);
        auto u = type(g, s.exprs[1]);
        if (u) private_access(g, s.exprs[0], *u, s.name, s.span);
        return;
      }
      case K::New: {
        if (!ct_.has_designations()) return;
        const std::string& c = g.at("self").name;
        if (!le_own(c) && !le_rep(c) && le_rep(s.name)) {
          flag(kNewRepInClient, "client " + c + " creates rep " + s.name,
               s.span);
        }
        if (le_rep(c) && le_own(s.name)) {
          flag(kNewOwnerInRep, "rep " + c + " creates owner " + s.name,
               s.span);
        }
        return;
      }
      case K::Call: {
        auto d = type(g, s.exprs[0]);
        if (!d || !d->is_class()) return;
        call(g, s, d->name, &s.exprs[0], {s.exprs.begin() + 1, s.exprs.end()});
        return;
      }
      case K::SuperCall: {
        auto sup = ct_.super(g.at("self").name).value_or(kRootClass);
        call(g, s, sup, nullptr, s.exprs);
        return;
      }
      case K::Local: {
        expr(g, s.exprs[0]);
        TypingContext inner = g;
        inner[s.var] = s.type;
        cmd(inner, s.body[0]);
        return;
      }
      case K::If:
      case K::While:
        expr(g, s.exprs[0]);
        for (const Stmt& b : s.body) cmd(g, b);
        return;
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

std::vector<Diagnostic> safe_expr(const ClassTable& ct,
                                  const TypingContext& gamma, const Expr& e) {
  std::vector<Diagnostic> out;
  Analyzer(ct, out).expr(gamma, e);
  return out;
}

std::vector<Diagnostic> safe_command(const ClassTable& ct,
                                     const TypingContext& gamma,
                                     const Stmt& s) {
  std::vector<Diagnostic> out;
  Analyzer(ct, out).cmd(gamma, s);
  return out;
}

Report safe_table(const ClassTable& ct) {
  Report r;
  auto& out = r.diagnostics;
  for (const ClassDecl& c : ct.decls()) {
    {
      Analyzer a(ct, out, c.name, "con", c.file);
      a.cmd({{"self", Type::cls(c.name)}}, c.constructor);
    }
    for (const MethodDecl& m : c.methods) {
      Analyzer a(ct, out, c.name, m.name, c.file);
      a.cmd(method_context(ct, c.name, m), m.body);
    }
  }
  if (ct.has_designations()) {
    const std::string& own = ct.designations().own;
    for (const std::string& c : ct.class_names()) {
      for (const std::string& m : ct.methods_of(c)) {
        auto sig = ct.mtype(m, c);
        auto rm = ct.resolve_method(m, c);
        Span span = rm->decl->span;
        std::string file = rm->declaring->file;
        if (ct.is_subclass(c, own) && !ct.mscope(m, c) &&
            ct.comparable_to_rep(sig->ret)) {
          out.push_back({kOwnerPublicReturnsRep,
                         "public method " + m + " of owner class " + c +
                             " returns rep-comparable type " + sig->ret.str(),
                         span, file, c, m});
        }
        bool from_above = rm->declaring->name != c &&
                          ct.is_subclass(c, rm->declaring->name);
        if (c == own && from_above) {
          for (const Type& t : sig->params) {
            if (ct.comparable_to_rep(t)) {
              out.push_back({kOwnerInheritsRepParams,
                             own + " inherits " + m + " from " +
                                 rm->declaring->name +
                                 " with rep-comparable parameter " + t.str(),
                             span, file, c, m});
              break;
            }
          }
        }
        const Designations& d = ct.designations();
        if ((c == d.rep || (!d.rep2.empty() && c == d.rep2)) && from_above) {
          out.push_back({kRepInheritsForeign,
                         "rep class " + c + " inherits " + m + " from " +
                             rm->declaring->name,
                         span, file, c, m});
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return r;
}

}  // namespace jcore
