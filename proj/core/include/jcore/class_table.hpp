// SPDX-License-Identifier: Apache-2.0
//
// The static world: declarations plus derived relations (subtyping, fields,
// method types, depth, constructor dependence, module scope, roles).

#ifndef JCORE_CLASS_TABLE_HPP
#define JCORE_CLASS_TABLE_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jcore/ast.hpp"

namespace jcore {

struct Designations {
  std::string own;
  std::string rep;
  std::string rep2;

  bool empty() const { return own.empty() && rep.empty() && rep2.empty(); }
  bool operator==(const Designations&) const = default;
};

enum class Role { Client, Owner, Rep };
const char* role_name(Role r);

struct MethodSig {
  std::vector<Type> params;
  Type ret;
  bool operator==(const MethodSig&) const = default;
  std::string str() const;
};

struct ResolvedMethod {
  const ClassDecl* declaring = nullptr;
  const MethodDecl* decl = nullptr;
};

class WellFormednessError : public std::runtime_error {
 public:
  WellFormednessError(std::string kind, std::string message, Span span = {},
                      std::string file = {})
      : std::runtime_error(kind + ": " + message),
        kind_(std::move(kind)),
        detail_(std::move(message)),
        span_(span),
        file_(std::move(file)) {}

  const std::string& kind() const { return kind_; }
  const std::string& detail() const { return detail_; }
  const Span& span() const { return span_; }
  const std::string& file() const { return file_; }

 private:
  std::string kind_;
  std::string detail_;
  Span span_;
  std::string file_;
};

class ClassTable {
 public:
  ClassTable();

  // Throws WellFormednessError.
  static ClassTable build(std::vector<ClassDecl> decls, Designations d = {});

  const Designations& designations() const;
  bool has_designations() const { return !designations().own.empty(); }

  // Declared classes in ascending name order (root excluded).
  std::vector<std::string> class_names() const;
  const std::vector<ClassDecl>& decls() const;
  bool is_declared(const std::string& c) const;  // true for the root
  const ClassDecl* decl(const std::string& c) const;
  std::optional<std::string> super(const std::string& c) const;

  bool is_subclass(const std::string& c, const std::string& d) const;
  bool subtype(const Type& t, const Type& u) const;
  bool incomparable(const Type& t, const Type& u) const;
  bool well_formed(const Type& t) const;

  // Declaration order, superclass fields first.
  std::vector<FieldDecl> fields(const std::string& c) const;
  const std::vector<FieldDecl>& dfields(const std::string& c) const;
  std::optional<Type> field_type(const std::string& c,
                                 const std::string& f) const;

  std::optional<ResolvedMethod> resolve_method(const std::string& m,
                                               const std::string& c) const;
  std::optional<MethodSig> mtype(const std::string& m,
                                 const std::string& c) const;
  std::optional<std::vector<std::string>> pars(const std::string& m,
                                               const std::string& c) const;
  // Names with mtype(m, c) defined, ascending.
  std::vector<std::string> methods_of(const std::string& c) const;
  int depth(const std::string& m, const std::string& c) const;
  bool mscope(const std::string& m, const std::string& c) const;

  // B ⊏ C and its transitive closure.
  bool constructor_depends(const std::string& b, const std::string& c) const;
  bool constructor_depends_plus(const std::string& b,
                                const std::string& c) const;

  // (method, Own) pairs.
  std::set<std::pair<std::string, std::string>> prot_methods() const;
  bool prot(const std::string& m) const;

  // Roles under the designations; Client when none are given.
  Role role_of_class(const std::string& c) const;
  bool is_owner_class(const std::string& c) const;
  bool is_rep_class(const std::string& c) const;
  std::vector<std::string> rep_classes() const;
  bool comparable_to_rep(const Type& t) const;
  bool comparable_to_own(const Type& t) const;

  // Copy of the table with other designations, rechecked.
  ClassTable with_designations(Designations d) const;

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

}  // namespace jcore

#endif  // JCORE_CLASS_TABLE_HPP
