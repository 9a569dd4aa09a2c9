// SPDX-License-Identifier: Apache-2.0

#include "jcore/class_table.hpp"

#include <algorithm>

namespace jcore {

const char* role_name(Role r) {
  switch (r) {
    case Role::Client: return "client";
    case Role::Owner: return "owner";
    case Role::Rep: return "rep";
  }
  return "?";
}

std::string MethodSig::str() const {
  std::string out = "(";
  for (size_t i = 0; i < params.size(); ++i) {
    if (i > 0) out += ", ";
    out += params[i].str();
  }
  return out + ") -> " + ret.str();
}

struct ClassTable::Data {
  std::vector<ClassDecl> decls;
  std::map<std::string, size_t> index;
  Designations des;
  std::map<std::string, std::set<std::string>> ctor_direct;
  std::map<std::string, std::set<std::string>> ctor_plus;
};

namespace {

const std::vector<FieldDecl> kNoFields;

void collect_new_targets(const Stmt& s, std::set<std::string>& out) {
  walk(s, [&](const Stmt& st) {
    if (st.kind == Stmt::Kind::New) out.insert(st.name);
    for (const Expr& e : st.exprs) {
      walk_expr(e, [&](const Expr& x) {
        if (x.kind == Expr::Kind::New) out.insert(x.name);
      });
    }
  });
}

void collect_type_refs(const Stmt& s, std::vector<std::pair<std::string, Span>>& out) {
  walk(s, [&](const Stmt& st) {
    if (st.kind == Stmt::Kind::Local && st.type.is_class()) {
      out.emplace_back(st.type.name, st.span);
    }
    if (st.kind == Stmt::Kind::New) out.emplace_back(st.name, st.span);
    for (const Expr& e : st.exprs) {
      walk_expr(e, [&](const Expr& x) {
        if (x.kind == Expr::Kind::Cast || x.kind == Expr::Kind::Is ||
            x.kind == Expr::Kind::New) {
          out.emplace_back(x.name, x.span);
        }
      });
    }
  });
}

bool calls_method(const Stmt& s, const std::string& m) {
  bool found = false;
  walk(s, [&](const Stmt& st) {
    if ((st.kind == Stmt::Kind::Call || st.kind == Stmt::Kind::SuperCall) &&
        st.name == m) {
      found = true;
    }
    for (const Expr& e : st.exprs) {
      walk_expr(e, [&](const Expr& x) {
        if ((x.kind == Expr::Kind::Call || x.kind == Expr::Kind::SuperCall) &&
            x.name == m) {
          found = true;
        }
      });
    }
  });
  return found;
}

}  // namespace

ClassTable::ClassTable() : data_(std::make_shared<Data>()) {}

const Designations& ClassTable::designations() const { return data_->des; }

const std::vector<ClassDecl>& ClassTable::decls() const { return data_->decls; }

std::vector<std::string> ClassTable::class_names() const {
  std::vector<std::string> out;
  for (const auto& [n, i] : data_->index) out.push_back(n);
  return out;
}

bool ClassTable::is_declared(const std::string& c) const {
  return c == kRootClass || data_->index.count(c) > 0;
}

const ClassDecl* ClassTable::decl(const std::string& c) const {
  auto it = data_->index.find(c);
  if (it == data_->index.end()) return nullptr;
  return &data_->decls[it->second];
}

std::optional<std::string> ClassTable::super(const std::string& c) const {
  const ClassDecl* d = decl(c);
  if (d == nullptr) return std::nullopt;
  return d->super_name;
}

bool ClassTable::is_subclass(const std::string& c, const std::string& d) const {
  if (d == kRootClass) return is_declared(c);
  std::string cur = c;
  for (size_t guard = 0; guard <= data_->decls.size() + 1; ++guard) {
    if (cur == d) return true;
    const ClassDecl* cd = decl(cur);
    if (cd == nullptr) return false;
    cur = cd->super_name;
  }
  return false;
}

bool ClassTable::subtype(const Type& t, const Type& u) const {
  if (t.is_primitive() || u.is_primitive()) return t == u;
  if (t.kind == Type::Kind::Null) {
    return u.kind == Type::Kind::Null || u.is_class();
  }
  if (u.kind == Type::Kind::Null) return false;
  return is_subclass(t.name, u.name);
}

bool ClassTable::incomparable(const Type& t, const Type& u) const {
  return !subtype(t, u) && !subtype(u, t);
}

bool ClassTable::well_formed(const Type& t) const {
  return !t.is_class() || is_declared(t.name);
}

std::vector<FieldDecl> ClassTable::fields(const std::string& c) const {
  std::vector<const ClassDecl*> chain;
  for (const ClassDecl* d = decl(c); d != nullptr; d = decl(d->super_name)) {
    chain.push_back(d);
    if (chain.size() > data_->decls.size()) break;
  }
  std::vector<FieldDecl> out;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    for (const FieldDecl& f : (*it)->fields) out.push_back(f);
  }
  return out;
}

const std::vector<FieldDecl>& ClassTable::dfields(const std::string& c) const {
  const ClassDecl* d = decl(c);
  return d == nullptr ? kNoFields : d->fields;
}

std::optional<Type> ClassTable::field_type(const std::string& c,
                                           const std::string& f) const {
  for (const FieldDecl& fd : fields(c)) {
    if (fd.name == f) return fd.type;
  }
  return std::nullopt;
}

std::optional<ResolvedMethod> ClassTable::resolve_method(
    const std::string& m, const std::string& c) const {
  size_t guard = 0;
  for (const ClassDecl* d = decl(c); d != nullptr; d = decl(d->super_name)) {
    if (const MethodDecl* md = d->find_method(m)) return ResolvedMethod{d, md};
    if (++guard > data_->decls.size()) break;
  }
  return std::nullopt;
}

std::optional<MethodSig> ClassTable::mtype(const std::string& m,
                                           const std::string& c) const {
  auto r = resolve_method(m, c);
  if (!r) return std::nullopt;
  MethodSig sig;
  for (const Param& p : r->decl->params) sig.params.push_back(p.type);
  sig.ret = r->decl->ret;
  return sig;
}

std::optional<std::vector<std::string>> ClassTable::pars(
    const std::string& m, const std::string& c) const {
  auto r = resolve_method(m, c);
  if (!r) return std::nullopt;
  std::vector<std::string> out;
  for (const Param& p : r->decl->params) out.push_back(p.name);
  return out;
}

std::vector<std::string> ClassTable::methods_of(const std::string& c) const {
  std::set<std::string> names;
  size_t guard = 0;
  for (const ClassDecl* d = decl(c); d != nullptr; d = decl(d->super_name)) {
    for (const MethodDecl& m : d->methods) names.insert(m.name);
    if (++guard > data_->decls.size()) break;
  }
  return {names.begin(), names.end()};
}

int ClassTable::depth(const std::string& m, const std::string& c) const {
  auto s = super(c);
  if (!s || !mtype(m, *s)) return 0;
  return 1 + depth(m, *s);
}

bool ClassTable::mscope(const std::string& m, const std::string& c) const {
  auto r = resolve_method(m, c);
  return r && r->decl->module_scoped;
}

bool ClassTable::constructor_depends(const std::string& b,
                                     const std::string& c) const {
  // B ⊏ C iff B ⊏ super C or new B occurs in constr C.
  for (std::string cur = c; is_declared(cur) && cur != kRootClass;
       cur = *super(cur)) {
    auto it = data_->ctor_direct.find(cur);
    if (it != data_->ctor_direct.end() && it->second.count(b)) return true;
  }
  return false;
}

bool ClassTable::constructor_depends_plus(const std::string& b,
                                          const std::string& c) const {
  auto it = data_->ctor_plus.find(c);
  return it != data_->ctor_plus.end() && it->second.count(b) > 0;
}

std::set<std::pair<std::string, std::string>> ClassTable::prot_methods() const {
  std::set<std::pair<std::string, std::string>> out;
  const std::string& own = data_->des.own;
  if (own.empty() || !decl(own)) return out;
  for (const std::string& m : methods_of(own)) {
    if (!mscope(m, own)) continue;
    for (const ClassDecl& c : data_->decls) {
      if (c.name == own || !is_subclass(c.name, own)) continue;
      bool used = calls_method(c.constructor, m) || c.find_method(m) != nullptr;
      for (const MethodDecl& md : c.methods) {
        if (calls_method(md.body, m)) used = true;
      }
      if (used) {
        out.emplace(m, own);
        break;
      }
    }
  }
  return out;
}

bool ClassTable::prot(const std::string& m) const {
  return prot_methods().count({m, data_->des.own}) > 0;
}

std::vector<std::string> ClassTable::rep_classes() const {
  std::vector<std::string> out;
  if (!data_->des.rep.empty()) out.push_back(data_->des.rep);
  if (!data_->des.rep2.empty() && data_->des.rep2 != data_->des.rep) {
    out.push_back(data_->des.rep2);
  }
  return out;
}

bool ClassTable::is_owner_class(const std::string& c) const {
  return !data_->des.own.empty() && is_subclass(c, data_->des.own);
}

bool ClassTable::is_rep_class(const std::string& c) const {
  for (const std::string& r : rep_classes()) {
    if (is_subclass(c, r)) return true;
  }
  return false;
}

Role ClassTable::role_of_class(const std::string& c) const {
  if (is_owner_class(c)) return Role::Owner;
  if (is_rep_class(c)) return Role::Rep;
  return Role::Client;
}

bool ClassTable::comparable_to_rep(const Type& t) const {
  if (!t.is_class()) return false;
  for (const std::string& r : rep_classes()) {
    if (!incomparable(t, Type::cls(r))) return true;
  }
  return false;
}

bool ClassTable::comparable_to_own(const Type& t) const {
  if (!t.is_class() || data_->des.own.empty()) return false;
  return !incomparable(t, Type::cls(data_->des.own));
}

ClassTable ClassTable::with_designations(Designations d) const {
  return build(data_->decls, std::move(d));
}

ClassTable ClassTable::build(std::vector<ClassDecl> decls, Designations des) {
  auto data = std::make_shared<Data>();
  data->des = des;
  for (size_t i = 0; i < decls.size(); ++i) {
    const ClassDecl& c = decls[i];
    if (c.name == kRootClass || data->index.count(c.name)) {
      throw WellFormednessError("DuplicateClass",
                                "class " + c.name + " declared more than once",
                                c.span, c.file);
    }
    data->index[c.name] = i;
  }
  data->decls = std::move(decls);
  ClassTable ct;
  ct.data_ = data;

  auto declared = [&](const std::string& n) {
    return n == kRootClass || data->index.count(n) > 0;
  };
  auto require_type = [&](const Type& t, const ClassDecl& c, Span s) {
    if (t.is_class() && !declared(t.name)) {
      throw WellFormednessError("UndeclaredClass",
                                "class " + t.name + " is not declared", s,
                                c.file);
    }
  };

  for (const ClassDecl& c : data->decls) {
    if (!declared(c.super_name)) {
      throw WellFormednessError(
          "UndeclaredClass",
          "superclass " + c.super_name + " of " + c.name + " is not declared",
          c.span, c.file);
    }
  }
  for (const ClassDecl& c : data->decls) {
    std::set<std::string> seen{c.name};
    for (std::string cur = c.super_name; cur != kRootClass;
         cur = data->decls[data->index[cur]].super_name) {
      if (!seen.insert(cur).second) {
        throw WellFormednessError("CyclicInheritance",
                                  "inheritance cycle through " + c.name,
                                  c.span, c.file);
      }
    }
  }

  for (const ClassDecl& c : data->decls) {
    std::set<std::string> names;
    std::set<std::string> inherited;
    for (const FieldDecl& f : ct.fields(c.super_name)) inherited.insert(f.name);
    for (const FieldDecl& f : c.fields) {
      require_type(f.type, c, f.span);
      if (!names.insert(f.name).second) {
        throw WellFormednessError("DuplicateMember",
                                  "field " + f.name + " declared twice in " +
                                      c.name,
                                  f.span, c.file);
      }
      if (inherited.count(f.name)) {
        throw WellFormednessError(
            "DuplicateMember",
            "field " + f.name + " of " + c.name + " is already inherited",
            f.span, c.file);
      }
    }
    std::set<std::string> mnames;
    for (const MethodDecl& m : c.methods) {
      if (!mnames.insert(m.name).second) {
        throw WellFormednessError("DuplicateMember",
                                  "method " + m.name + " declared twice in " +
                                      c.name,
                                  m.span, c.file);
      }
      require_type(m.ret, c, m.span);
      std::set<std::string> pnames;
      for (const Param& p : m.params) {
        require_type(p.type, c, m.span);
        if (p.name == "self" || p.name == "result") {
          throw WellFormednessError(
              "BadParameter", "parameter may not be named " + p.name, m.span,
              c.file);
        }
        if (!pnames.insert(p.name).second) {
          throw WellFormednessError("DuplicateMember",
                                    "parameter " + p.name + " repeated in " +
                                        c.name + "." + m.name,
                                    m.span, c.file);
        }
      }
    }
    std::vector<std::pair<std::string, Span>> refs;
    collect_type_refs(c.constructor, refs);
    for (const MethodDecl& m : c.methods) collect_type_refs(m.body, refs);
    for (const auto& [n, s] : refs) require_type(Type::cls(n), c, s);
  }

  if (!des.empty()) {
    if (des.own.empty() || des.rep.empty()) {
      throw WellFormednessError("BadDesignation",
                                "both Own and Rep must be designated");
    }
    for (const std::string* n : {&des.own, &des.rep, &des.rep2}) {
      if (n->empty()) continue;
      if (!data->index.count(*n)) {
        throw WellFormednessError("UndeclaredClass",
                                  "designated class " + *n +
                                      " is not declared");
      }
    }
    for (const std::string& r : ct.rep_classes()) {
      if (!ct.incomparable(Type::cls(des.own), Type::cls(r))) {
        throw WellFormednessError(
            "BadDesignation", "owner " + des.own + " is comparable to rep " + r);
      }
    }
  }

  // Module scope: allowed only inside the module, never above it, and kept
  // by every override.
  for (const ClassDecl& c : data->decls) {
    for (const MethodDecl& m : c.methods) {
      auto above = ct.resolve_method(m.name, c.super_name);
      if (above && above->decl->module_scoped != m.module_scoped) {
        throw WellFormednessError(
            "BadModuleScope",
            c.name + "." + m.name +
                " changes the module scope of the method it overrides",
            m.span, c.file);
      }
      if (!m.module_scoped || des.empty()) continue;
      std::vector<std::string> anchors;
      if (ct.is_owner_class(c.name)) anchors.push_back(des.own);
      for (const std::string& r : ct.rep_classes()) {
        if (ct.is_subclass(c.name, r)) anchors.push_back(r);
      }
      if (anchors.empty()) {
        throw WellFormednessError(
            "BadModuleScope",
            c.name + "." + m.name + " is module scoped outside owner/rep classes",
            m.span, c.file);
      }
      for (const std::string& a : anchors) {
        auto s = ct.super(a);
        if (s && ct.mtype(m.name, *s)) {
          throw WellFormednessError(
              "BadModuleScope",
              c.name + "." + m.name + " is module scoped but declared above " + a,
              m.span, c.file);
        }
      }
    }
  }

  for (const ClassDecl& c : data->decls) {
    collect_new_targets(c.constructor, data->ctor_direct[c.name]);
  }
  // ⊏ closed transitively; ⊏ itself already folds in superclasses.
  std::map<std::string, std::set<std::string>> dep;
  for (const ClassDecl& c : data->decls) {
    for (const ClassDecl& b : data->decls) {
      if (ct.constructor_depends(b.name, c.name)) dep[c.name].insert(b.name);
    }
  }
  for (const ClassDecl& c : data->decls) {
    std::set<std::string> closure;
    std::vector<std::string> work(dep[c.name].begin(), dep[c.name].end());
    while (!work.empty()) {
      std::string b = work.back();
      work.pop_back();
      if (!closure.insert(b).second) continue;
      for (const std::string& x : dep[b]) work.push_back(x);
    }
    if (closure.count(c.name)) {
      throw WellFormednessError(
          "CyclicConstructorDependence",
          "constructing " + c.name + " requires constructing " + c.name,
          c.span, c.file);
    }
    data->ctor_plus[c.name] = std::move(closure);
  }
  return ct;
}

}  // namespace jcore
