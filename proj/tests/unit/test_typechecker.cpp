#include <gtest/gtest.h>

#include <variant>

#include "jcore/parser.hpp"
#include "jcore/program.hpp"
#include "jcore/typechecker.hpp"
#include "properties.hpp"

using namespace jcore;

namespace {

std::string cfile(const std::string& f) {
  return oracle::corpus_dir() + "/" + f + ".jcore";
}

std::vector<Source> sources(std::initializer_list<const char*> files) {
  std::vector<Source> out;
  for (const char* f : files) out.push_back({cfile(f), read_file(cfile(f))});
  return out;
}

ClassTable observer_v1() {
  return load_sources(sources({"observer_base", "observer_v1", "observer_client"}),
                      {"Observable", "Node", ""});
}

Expr field(Expr recv, const std::string& f) {
  Expr e;
  e.kind = Expr::Kind::Field;
  e.name = f;
  e.kids.push_back(std::move(recv));
  return e;
}

// Rules reported when loading fails with a type error, or "ok".
std::vector<std::string> rules_of(std::vector<Source> srcs, Designations d = {}) {
  try {
    load_sources(srcs, d);
  } catch (const TypeCheckError& e) {
    return e.report().rules();
  }
  return {"ok"};
}

std::vector<std::string> rules_of(const std::string& text, Designations d = {}) {
  return rules_of(std::vector<Source>{{"t", text}}, d);
}

bool has(const std::vector<std::string>& rs, const std::string& r) {
  return std::find(rs.begin(), rs.end(), r) != rs.end();
}

}  // namespace

TEST(TypeOfExpr, FieldOfSelf) {
  ClassTable ct = observer_v1();
  TypingContext g{{"self", Type::cls("Observable")}};
  TypeResult t = type_of_expr(ct, g, field(Expr::var("self"), "fst"));
  ASSERT_TRUE(std::holds_alternative<Type>(t));
  EXPECT_EQ(std::get<Type>(t), Type::cls("Node"));
}

TEST(TypeOfExpr, NullFitsAnyClassPosition) {
  ClassTable ct = observer_v1();
  TypingContext g{{"self", Type::cls("Main")}};
  Expr null_e;
  null_e.kind = Expr::Kind::Null;
  TypeResult t = type_of_expr(ct, g, null_e);
  ASSERT_TRUE(std::holds_alternative<Type>(t));
  for (const std::string& c : ct.class_names()) {
    EXPECT_TRUE(ct.subtype(std::get<Type>(t), Type::cls(c)));
  }
  EXPECT_EQ(rules_of("class A extends Object { A f; unit m() { self.f := null } }"),
            std::vector<std::string>{"ok"});
}

TEST(TypeOfExpr, ForeignPrivateField) {
  ClassTable ct = observer_v1();
  TypingContext g{{"self", Type::cls("Main")}, {"x", Type::cls("Observable")}};
  TypeResult t = type_of_expr(ct, g, field(Expr::var("x"), "fst"));
  ASSERT_TRUE(std::holds_alternative<Diagnostic>(t));
  EXPECT_EQ(std::get<Diagnostic>(t).rule, "PrivateFieldAccess");
}

TEST(TypeOfExpr, AtMostOneType) {
  ClassTable ct = observer_v1();
  TypingContext g{{"self", Type::cls("Observable")}};
  Expr e = field(Expr::var("self"), "fst");
  TypeResult a = type_of_expr(ct, g, e);
  TypeResult b = type_of_expr(ct, g, e);
  EXPECT_EQ(std::get<Type>(a), std::get<Type>(b));
}

TEST(CheckCommand, ObservableAddBody) {
  ClassTable ct = observer_v1();
  const MethodDecl* add = ct.decl("Observable")->find_method("add");
  TypingContext g = method_context(ct, "Observable", *add);
  EXPECT_EQ(g.at("ob"), Type::cls("Observer"));
  EXPECT_EQ(g.at("self"), Type::cls("Observable"));
  EXPECT_EQ(g.at("result"), Type::unit());
  EXPECT_TRUE(check_command(ct, g, add->body).empty());
}

TEST(CheckCommand, SelfIsNotAssignable) {
  EXPECT_THROW(load_source("class A extends Object { unit m() { self := null } }"),
               ParseError);
  ClassTable ct = load_source("class A extends Object { unit m() { skip } }");
  Stmt s;
  s.kind = Stmt::Kind::Assign;
  s.var = "self";
  s.exprs.push_back(Expr::lit_default(Type::cls("A")));
  auto d = check_command(ct, {{"self", Type::cls("A")}}, s);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].rule, "SelfAssignment");
}

TEST(CheckCommand, UnknownMethodInCoreCall) {
  EXPECT_THROW(load_source("class A extends Object { unit m() { self.n() } }"),
               DesugarError);
  ClassTable ct = load_source("class A extends Object { unit m() { skip } }");
  Stmt s;
  s.kind = Stmt::Kind::Call;
  s.var = "t";
  s.name = "n";
  s.exprs.push_back(Expr::var("self"));
  auto d = check_command(ct, {{"self", Type::cls("A")}, {"t", Type::unit()}}, s);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].rule, "UnknownMethod");
  s.name = "m";
  s.exprs.push_back(Expr::var("self"));
  d = check_command(ct, {{"self", Type::cls("A")}, {"t", Type::unit()}}, s);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].rule, "ArityMismatch");
}

TEST(CheckCommand, ClientCallingModuleMethod) {
  auto srcs = sources({"observer_base", "node4", "observer_factory"});
  srcs.push_back({"bad_client", R"(
class Sneaky extends Object {
  unit poke(Observable o) { Node4 n := o.makeNode() in skip }
}
)"});
  EXPECT_TRUE(has(rules_of(srcs, {"Observable", "Node4", ""}),
                  "ModuleScopeViolation"));
}

TEST(CheckTable, ObserverCorpusIsWellTyped) {
  ClassTable ct = observer_v1();
  EXPECT_TRUE(check_table(ct).ok());
}

TEST(CheckTable, OverrideMustKeepSignature) {
  EXPECT_TRUE(has(rules_of(R"(
class A extends Object { unit m(bool b) { skip } }
class B extends A { unit m(int b) { skip } }
)"),
                  "InvalidOverride"));
}

TEST(CheckTable, NoCallsInConstructors) {
  EXPECT_TRUE(has(rules_of(R"(
class A extends Object { A f; A get() { result := self.f } }
class B extends Object { A g; con { A x := self.g.get() in skip } }
)"),
                  "CallInConstructor"));
}

TEST(CheckTable, OtherRules) {
  EXPECT_TRUE(has(rules_of("class A extends Object { unit m() { Object o := new Object in skip } }"),
                  "InstantiateObject"));
  EXPECT_TRUE(has(rules_of("class A extends Object { unit m() { y := true } }"),
                  "UndeclaredVariable"));
  EXPECT_TRUE(has(rules_of("class A extends Object { bool f; unit m() { self.f := 3 } }"),
                  "TypeMismatch"));
  EXPECT_TRUE(has(rules_of("class A extends Object { unit m() { self.g := true } }"),
                  "UnknownField"));
}

TEST(CheckTable, WholeCorpusChecks) {
  for (const auto& [rec, ct] : oracle::loaded_corpus()) {
    SCOPED_TRACE(rec.name);
    EXPECT_TRUE(check_table(ct).ok());
  }
}
