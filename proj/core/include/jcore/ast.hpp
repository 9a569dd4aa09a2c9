// SPDX-License-Identifier: Apache-2.0
//
// Abstract syntax shared by the parser, the desugarer and every analysis.
// Surface-only forms (expression calls, `new` in expression position,
// call statements without a target) are removed by desugar().

#ifndef JCORE_AST_HPP
#define JCORE_AST_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace jcore {

struct Span {
  int line = 0;
  int column = 0;
  int end_line = 0;
  int end_column = 0;

  std::string str() const;
};

struct Type {
  // Null is internal: the synthesized type of `null`, below every class.
  enum class Kind { Bool, Unit, Int, Class, Null };

  Kind kind = Kind::Unit;
  std::string name;

  static Type boolean() { return {Kind::Bool, {}}; }
  static Type unit() { return {Kind::Unit, {}}; }
  static Type integer() { return {Kind::Int, {}}; }
  static Type null() { return {Kind::Null, {}}; }
  static Type cls(std::string n) { return {Kind::Class, std::move(n)}; }

  bool is_class() const { return kind == Kind::Class; }
  bool is_primitive() const {
    return kind == Kind::Bool || kind == Kind::Unit || kind == Kind::Int;
  }
  bool operator==(const Type&) const = default;
  std::string str() const;
};

struct Expr {
  enum class Kind {
    Var,
    Null,
    True,
    False,
    UnitLit,
    IntLit,
    Field,  // kids[0].name
    Eq,     // kids[0] = kids[1]
    Not,
    Cast,   // (name) kids[0]
    Is,     // kids[0] is name
    Add,
    Sub,
    Mod,
    Lt,
    // surface only
    Call,       // kids[0].name(kids[1..])
    SuperCall,  // super.name(kids)
    New,        // new name
  };

  Kind kind = Kind::UnitLit;
  std::string name;
  std::int64_t value = 0;
  std::vector<Expr> kids;
  Span span;

  static Expr var(std::string n, Span s = {});
  static Expr lit_default(const Type& t);
};

struct Stmt {
  enum class Kind {
    Assign,       // var := exprs[0]
    FieldAssign,  // exprs[0].name := exprs[1]
    New,          // var := new name
    Call,         // var := exprs[0].name(exprs[1..]); var empty in surface
    SuperCall,    // var := super.name(exprs)
    Local,        // type var := exprs[0] in body[0]
    If,           // if exprs[0] then body[0] else body[1] fi
    Seq,          // body[0]; body[1]; ...
    Skip,
    Abort,
    While,  // while exprs[0] do body[0] od
  };

  Kind kind = Kind::Skip;
  std::string var;
  std::string name;
  Type type;
  std::vector<Expr> exprs;
  std::vector<Stmt> body;
  Span span;

  static Stmt skip(Span s = {});
  static Stmt seq(std::vector<Stmt> items, Span s = {});
};

struct Param {
  std::string name;
  Type type;
  bool operator==(const Param&) const = default;
};

struct FieldDecl {
  std::string name;
  Type type;
  Span span;
};

struct MethodDecl {
  std::string name;
  Type ret;
  std::vector<Param> params;
  Stmt body;
  bool module_scoped = false;
  Span span;
};

struct ClassDecl {
  std::string name;
  std::string super_name = "Object";
  std::vector<FieldDecl> fields;
  Stmt constructor;
  std::vector<MethodDecl> methods;
  Span span;
  std::string file;

  const MethodDecl* find_method(const std::string& m) const;
};

using TypingContext = std::map<std::string, Type>;

inline constexpr const char* kRootClass = "Object";

// Pretty printer. Output re-parses to the same tree (temporaries need the
// reserved-identifier parser option).
std::string to_source(const Expr& e);
std::string to_source(const Stmt& s, int indent = 0);
std::string to_source(const MethodDecl& m, int indent = 0);
std::string to_source(const ClassDecl& c);
std::string to_source(const std::vector<ClassDecl>& decls);

// Span-insensitive structural equality.
bool same_structure(const Expr& a, const Expr& b);
bool same_structure(const Stmt& a, const Stmt& b);
bool same_structure(const ClassDecl& a, const ClassDecl& b);

// True when no surface-only form remains.
bool is_core(const Expr& e);
bool is_core(const Stmt& s);

// Visits every statement node, pre-order.
template <class F>
void walk(const Stmt& s, F&& f) {
  f(s);
  for (const Stmt& b : s.body) walk(b, f);
}

template <class F>
void walk_expr(const Expr& e, F&& f) {
  f(e);
  for (const Expr& k : e.kids) walk_expr(k, f);
}

}  // namespace jcore

#endif  // JCORE_AST_HPP
