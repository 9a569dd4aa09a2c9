#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "jcore/parser.hpp"
#include "jcore/program.hpp"
#include "jcore/safety.hpp"
#include "jcore/typechecker.hpp"
#include "properties.hpp"

using namespace jcore;

namespace {

std::string cfile(const std::string& f) {
  return oracle::corpus_dir() + "/" + f + ".jcore";
}

std::string text(std::initializer_list<const char*> files) {
  std::string s;
  for (const char* f : files) s += read_file(cfile(f)) + "\n";
  return s;
}

Expr field(Expr recv, const std::string& f) {
  Expr e;
  e.kind = Expr::Kind::Field;
  e.name = f;
  e.kids.push_back(std::move(recv));
  return e;
}

std::set<std::string> rules(const Report& r) {
  auto v = r.rules();
  return {v.begin(), v.end()};
}

std::set<std::string> analyze(const std::string& src, Designations d) {
  return rules(safe_table(load_source(src, "t", d)));
}

const Designations kObs{"Observable", "Node", ""};
const Designations kObs4{"Observable", "Node4", ""};

}  // namespace

TEST(SafeExpr, OwnerFieldOnlyThroughSelf) {
  ClassTable ct = load_source(text({"observer_base", "observer_v1"}), "t", kObs);
  TypingContext g{{"self", Type::cls("Observable")}, {"o", Type::cls("Observable")}};
  EXPECT_TRUE(safe_expr(ct, g, field(Expr::var("self"), "fst")).empty());
  auto d = safe_expr(ct, g, field(Expr::var("o"), "fst"));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].rule, kNonSelfPrivateAccess);
}

TEST(SafeExpr, ClientsAreUnrestricted) {
  ClassTable ct = load_source(text({"observer_base", "observer_v1", "observer_client"}),
                              "t", kObs);
  TypingContext g{{"self", Type::cls("Main")}};
  EXPECT_TRUE(safe_expr(ct, g, field(Expr::var("self"), "ob")).empty());
}

// The inherited fst is already private; a field the sub-owner declares
// itself is caught by the analysis.
TEST(SafeExpr, SubOwnerReadingRepField) {
  ClassTable ct = load_source(
      text({"observer_base", "node4", "observer_sub"}) +
          "class ObservableKeep extends Observable { Node4 spare; }\n",
      "t", kObs4);
  TypingContext g{{"self", Type::cls("ObservableKeep")}};
  auto d = safe_expr(ct, g, field(Expr::var("self"), "spare"));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].rule, kSubOwnerRepAccess);
}

TEST(SafeCommand, ClientCreatesRep) {
  EXPECT_EQ(analyze(text({"observer_base", "observer_v1", "rep_in_client"}), kObs),
            std::set<std::string>{kNewRepInClient});
}

TEST(SafeCommand, SubOwnerAddIsSafe) {
  ClassTable ct = load_source(text({"observer_base", "node4", "observer_sub"}),
                              "t", kObs4);
  const MethodDecl* add = ct.decl("ObservableAcc")->find_method("add");
  ASSERT_TRUE(add);
  EXPECT_TRUE(safe_command(ct, method_context(ct, "ObservableAcc", *add), add->body)
                  .empty());
}

TEST(SafeCommand, OwnerPassesRepToClient) {
  std::string v1 = read_file(cfile("observer_v1"));
  std::string anchor = "class Observable extends Object {\n  Node fst;\n";
  auto at = v1.find(anchor);
  ASSERT_NE(at, std::string::npos);
  v1.insert(at + anchor.size(), "  unit share(Leaky l) { l.leak(self.fst) }\n");
  std::string src = read_file(cfile("observer_base")) + v1 +
                    "class Leaky extends Object { unit leak(Node n) { skip } }\n";
  EXPECT_TRUE(analyze(src, kObs).count(kRepLeakViaCall));
}

TEST(SafeTable, BadMethodsReturningTheRep) {
  for (const char* bad : {"obool_bad_v1", "obool_bad_v2", "obool_bad_object"}) {
    SCOPED_TRACE(bad);
    EXPECT_EQ(analyze(text({"bool", bad}), {"OBool", "Bool", ""}),
              std::set<std::string>{kOwnerPublicReturnsRep});
  }
}

TEST(SafeTable, RepInheritingFromAbove) {
  EXPECT_EQ(analyze("class Base extends Object { unit hi() { skip } }\n"
                    "class R extends Base { }\n"
                    "class O extends Object { R r; }",
                    {"O", "R", ""}),
            std::set<std::string>{kRepInheritsForeign});
}

TEST(SafeTable, OwnerCreatedInRep) {
  EXPECT_TRUE(analyze("class O extends Object { R r; }\n"
                      "class R extends Object { unit m() { O o := new O in skip } }",
                      {"O", "R", ""})
                  .count(kNewOwnerInRep));
}

TEST(SafeTable, NoDesignationsNoDiagnostics) {
  EXPECT_TRUE(analyze(text({"observer_base", "observer_v1", "rep_in_client"}), {})
                  .empty());
}

TEST(SafeTable, CorpusMatchesExpectations) {
  for (const auto& [rec, ct] : oracle::loaded_corpus()) {
    if (!rec.analyze) continue;
    SCOPED_TRACE(rec.name);
    std::set<std::string> want(rec.analyze->begin(), rec.analyze->end());
    EXPECT_EQ(rules(safe_table(ct)), want);
  }
}

TEST(SafetyProperties, DeterministicAcrossDeclarationOrder) {
  for (const auto& [rec, ct] : oracle::loaded_corpus()) {
    SCOPED_TRACE(rec.name);
    std::vector<ClassDecl> rev = ct.decls();
    std::reverse(rev.begin(), rev.end());
    ClassTable other = ClassTable::build(rev, ct.designations());
    EXPECT_EQ(safe_table(ct).diagnostics, safe_table(other).diagnostics);
  }
}

TEST(SafetyProperties, StableUnderDesugaring) {
  ParseOptions opts;
  opts.allow_reserved = true;
  for (const auto& [rec, ct] : oracle::loaded_corpus()) {
    SCOPED_TRACE(rec.name);
    std::vector<ClassDecl> again =
        desugar(parse(to_source(ct.decls()), "rt", opts).classes);
    ClassTable rt = ClassTable::build(again, ct.designations());
    EXPECT_EQ(rules(safe_table(rt)), rules(safe_table(ct)));
  }
}
