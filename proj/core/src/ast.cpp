// SPDX-License-Identifier: Apache-2.0

#include "jcore/ast.hpp"

#include <sstream>

namespace jcore {

std::string Span::str() const {
  return std::to_string(line) + ":" + std::to_string(column);
}

std::string Type::str() const {
  switch (kind) {
    case Kind::Bool: return "bool";
    case Kind::Unit: return "unit";
    case Kind::Int: return "int";
    case Kind::Null: return "null";
    case Kind::Class: return name;
  }
  return "?";
}

Expr Expr::var(std::string n, Span s) {
  Expr e;
  e.kind = Kind::Var;
  e.name = std::move(n);
  e.span = s;
  return e;
}

Expr Expr::lit_default(const Type& t) {
  Expr e;
  switch (t.kind) {
    case Type::Kind::Bool: e.kind = Kind::False; break;
    case Type::Kind::Unit: e.kind = Kind::UnitLit; break;
    case Type::Kind::Int: e.kind = Kind::IntLit; break;
    case Type::Kind::Class:
    case Type::Kind::Null: e.kind = Kind::Null; break;
  }
  return e;
}

Stmt Stmt::skip(Span s) {
  Stmt st;
  st.kind = Kind::Skip;
  st.span = s;
  return st;
}

Stmt Stmt::seq(std::vector<Stmt> items, Span s) {
  std::vector<Stmt> flat;
  for (Stmt& i : items) {
    if (i.kind == Kind::Seq) {
      for (Stmt& j : i.body) flat.push_back(std::move(j));
    } else {
      flat.push_back(std::move(i));
    }
  }
  if (flat.empty()) return skip(s);
  if (flat.size() == 1) return std::move(flat[0]);
  Stmt st;
  st.kind = Kind::Seq;
  st.body = std::move(flat);
  st.span = s;
  return st;
}

const MethodDecl* ClassDecl::find_method(const std::string& m) const {
  for (const MethodDecl& d : methods) {
    if (d.name == m) return &d;
  }
  return nullptr;
}

namespace {

std::string args_source(const std::vector<Expr>& kids, size_t from) {
  std::string out = "(";
  for (size_t i = from; i < kids.size(); ++i) {
    if (i > from) out += ", ";
    out += to_source(kids[i]);
  }
  return out + ")";
}

std::string binary(const Expr& e, const char* op) {
  return "(" + to_source(e.kids[0]) + " " + op + " " + to_source(e.kids[1]) +
         ")";
}

std::string pad(int indent) { return std::string(indent * 2, ' '); }

}  // namespace

std::string to_source(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::Var: return e.name;
    case K::Null: return "null";
    case K::True: return "true";
    case K::False: return "false";
    case K::UnitLit: return "it";
    case K::IntLit: return std::to_string(e.value);
    case K::Field: return to_source(e.kids[0]) + "." + e.name;
    case K::Eq: return binary(e, "=");
    case K::Not: return "(!" + to_source(e.kids[0]) + ")";
    case K::Cast: return "((" + e.name + ") " + to_source(e.kids[0]) + ")";
    case K::Is: return "(" + to_source(e.kids[0]) + " is " + e.name + ")";
    case K::Add: return binary(e, "+");
    case K::Sub: return binary(e, "-");
    case K::Mod: return binary(e, "mod");
    case K::Lt: return binary(e, "<");
    case K::Call:
      return to_source(e.kids[0]) + "." + e.name + args_source(e.kids, 1);
    case K::SuperCall: return "super." + e.name + args_source(e.kids, 0);
    case K::New: return "new " + e.name;
  }
  return "?";
}

std::string to_source(const Stmt& s, int indent) {
  using K = Stmt::Kind;
  std::string p = pad(indent);
  switch (s.kind) {
    case K::Assign: return p + s.var + " := " + to_source(s.exprs[0]);
    case K::FieldAssign:
      return p + to_source(s.exprs[0]) + "." + s.name +
             " := " + to_source(s.exprs[1]);
    case K::New: return p + s.var + " := new " + s.name;
    case K::Call: {
      std::string call =
          to_source(s.exprs[0]) + "." + s.name + args_source(s.exprs, 1);
      return p + (s.var.empty() ? call : s.var + " := " + call);
    }
    case K::SuperCall: {
      std::string call = "super." + s.name + args_source(s.exprs, 0);
      return p + (s.var.empty() ? call : s.var + " := " + call);
    }
    case K::Local:
      return p + s.type.str() + " " + s.var + " := " + to_source(s.exprs[0]) +
             " in\n" + to_source(s.body[0], indent);
    case K::If:
      return p + "if " + to_source(s.exprs[0]) + " then\n" +
             to_source(s.body[0], indent + 1) + "\n" + p + "else\n" +
             to_source(s.body[1], indent + 1) + "\n" + p + "fi";
    case K::Seq: {
      std::string out;
      for (size_t i = 0; i < s.body.size(); ++i) {
        if (i > 0) out += ";\n";
        const Stmt& item = s.body[i];
        bool last = i + 1 == s.body.size();
        if (item.kind == K::Local && !last) {
          out += p + "{\n" + to_source(item, indent + 1) + "\n" + p + "}";
        } else {
          out += to_source(item, indent);
        }
      }
      return out;
    }
    case K::Skip: return p + "skip";
    case K::Abort: return p + "abort";
    case K::While:
      return p + "while " + to_source(s.exprs[0]) + " do\n" +
             to_source(s.body[0], indent + 1) + "\n" + p + "od";
  }
  return "?";
}

std::string to_source(const MethodDecl& m, int indent) {
  std::string out = pad(indent);
  if (m.module_scoped) out += "module ";
  out += m.ret.str() + " " + m.name + "(";
  for (size_t i = 0; i < m.params.size(); ++i) {
    if (i > 0) out += ", ";
    out += m.params[i].type.str() + " " + m.params[i].name;
  }
  out += ") {\n" + to_source(m.body, indent + 1) + "\n" + pad(indent) + "}";
  return out;
}

std::string to_source(const ClassDecl& c) {
  std::string out = "class " + c.name + " extends " + c.super_name + " {\n";
  for (const FieldDecl& f : c.fields) {
    out += "  " + f.type.str() + " " + f.name + ";\n";
  }
  if (c.constructor.kind != Stmt::Kind::Skip) {
    out += "  con {\n" + to_source(c.constructor, 2) + "\n  }\n";
  }
  for (const MethodDecl& m : c.methods) out += to_source(m, 1) + "\n";
  return out + "}\n";
}

std::string to_source(const std::vector<ClassDecl>& decls) {
  std::string out;
  for (size_t i = 0; i < decls.size(); ++i) {
    if (i > 0) out += "\n";
    out += to_source(decls[i]);
  }
  return out;
}

bool same_structure(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.name != b.name || a.value != b.value ||
      a.kids.size() != b.kids.size()) {
    return false;
  }
  for (size_t i = 0; i < a.kids.size(); ++i) {
    if (!same_structure(a.kids[i], b.kids[i])) return false;
  }
  return true;
}

bool same_structure(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.var != b.var || a.name != b.name ||
      !(a.type == b.type) || a.exprs.size() != b.exprs.size() ||
      a.body.size() != b.body.size()) {
    return false;
  }
  for (size_t i = 0; i < a.exprs.size(); ++i) {
    if (!same_structure(a.exprs[i], b.exprs[i])) return false;
  }
  for (size_t i = 0; i < a.body.size(); ++i) {
    if (!same_structure(a.body[i], b.body[i])) return false;
  }
  return true;
}

bool same_structure(const ClassDecl& a, const ClassDecl& b) {
  if (a.name != b.name || a.super_name != b.super_name ||
      a.fields.size() != b.fields.size() ||
      a.methods.size() != b.methods.size() ||
      !same_structure(a.constructor, b.constructor)) {
    return false;
  }
  for (size_t i = 0; i < a.fields.size(); ++i) {
    if (a.fields[i].name != b.fields[i].name ||
        !(a.fields[i].type == b.fields[i].type)) {
      return false;
    }
  }
  for (size_t i = 0; i < a.methods.size(); ++i) {
    const MethodDecl& x = a.methods[i];
    const MethodDecl& y = b.methods[i];
    if (x.name != y.name || !(x.ret == y.ret) || x.params != y.params ||
        x.module_scoped != y.module_scoped ||
        !same_structure(x.body, y.body)) {
      return false;
    }
  }
  return true;
}

bool is_core(const Expr& e) {
  using K = Expr::Kind;
  if (e.kind == K::Call || e.kind == K::SuperCall || e.kind == K::New) {
    return false;
  }
  for (const Expr& k : e.kids) {
    if (!is_core(k)) return false;
  }
  return true;
}

bool is_core(const Stmt& s) {
  if ((s.kind == Stmt::Kind::Call || s.kind == Stmt::Kind::SuperCall) &&
      s.var.empty()) {
    return false;
  }
  for (const Expr& e : s.exprs) {
    if (!is_core(e)) return false;
  }
  for (const Stmt& b : s.body) {
    if (!is_core(b)) return false;
  }
  return true;
}

}  // namespace jcore
