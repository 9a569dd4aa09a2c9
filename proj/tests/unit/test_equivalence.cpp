#include <gtest/gtest.h>

#include <random>

#include "jcore/equivalence.hpp"
#include "jcore/program.hpp"
#include "oracles.hpp"
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

Location L(const std::string& c, std::uint32_t i) { return {c, i}; }

GlobalState final_state(const ClassTable& ct) {
  RunResult r = run(ct, "Main", "main");
  EXPECT_TRUE(r.outcome.ok());
  return r.outcome.value();
}

}  // namespace

TEST(TypedBijection, StaysInjectiveAndTyped) {
  TypedBijection s;
  EXPECT_TRUE(s.add(L("A", 0), L("A", 3)));
  EXPECT_TRUE(s.add(L("A", 0), L("A", 3)));
  EXPECT_FALSE(s.add(L("A", 1), L("A", 3)));
  EXPECT_FALSE(s.add(L("A", 0), L("A", 4)));
  EXPECT_FALSE(s.add(L("A", 2), L("B", 2)));
  EXPECT_EQ(s.size(), 1u);
  EXPECT_EQ(s.backward(L("A", 3)), L("A", 0));
  EXPECT_FALSE(s.is_identity());
}

TEST(Comparable, SentinelAgainstPlainList) {
  EquivManifest m = load_manifest(oracle::manifest_path("observer_v1_v3"));
  ComparedTables t = load_compared(m);
  EXPECT_FALSE(check_comparable(t.a, t.b));
  EXPECT_TRUE(t.a.is_declared("Node2"));
  EXPECT_TRUE(t.b.is_declared("Node"));
}

TEST(Comparable, TableAgainstItself) {
  ClassTable ct = load_program({cfile("observer_base"), cfile("observer_v1"),
                                cfile("observer_client")},
                               {"Observable", "Node", ""});
  EXPECT_FALSE(check_comparable(ct, ct));
}

TEST(Comparable, ClientBodiesMustMatch) {
  Designations d{"Observable", "Node", ""};
  std::string base = text({"observer_base", "observer_v1"});
  std::string client = read_file(cfile("observer_client"));
  std::string changed = client;
  auto at = changed.find("self.count + 1");
  ASSERT_NE(at, std::string::npos);
  changed.replace(at, 14, "self.count + 2");
  auto err = check_comparable(load_source(base + client, "a", d),
                              load_source(base + changed, "b", d));
  ASSERT_TRUE(err);
  EXPECT_NE(err->member.find("AnObserver"), std::string::npos);
}

TEST(CanonicalBijection, IdenticalStatesGiveIdentity) {
  ClassTable ct = load_program({cfile("observer_base"), cfile("observer_v1"),
                                cfile("observer_client")});
  GlobalState st = collect(final_state(ct));
  BijectionResult r = canonical_bijection(ct, ct, st, st);
  ASSERT_TRUE(r.ok) << r.path << " " << r.reason;
  EXPECT_TRUE(r.sigma.is_identity());
  EXPECT_EQ(r.sigma.size(), st.heap.size());
}

TEST(CanonicalBijection, VersionObjectsAtDifferentLocations) {
  Designations d{"Observable", "Node", ""};
  ClassTable a = load_source(text({"observer_base", "str", "observer_version_v1",
                                   "version_client"}), "a", d);
  ClassTable b = load_source(text({"observer_base", "str", "observer_version_v2",
                                   "version_client"}), "b", d);
  GlobalState sa = collect(final_state(a));
  GlobalState sb = collect(final_state(b));
  ASSERT_NE(sa, sb);
  BijectionResult r = canonical_bijection(a, b, sa, sb);
  ASSERT_TRUE(r.ok) << r.path << " " << r.reason;
  Location va = sa.heap.at(sa.store.at("self").loc).at("v").loc;
  Location vb = sb.heap.at(sb.store.at("self").loc).at("v").loc;
  EXPECT_NE(va, vb);
  EXPECT_EQ(r.sigma.forward(va), vb);
}

TEST(CanonicalBijection, OneFlippedBoolean) {
  ClassTable ct = oracle::bijection_table();
  GlobalState a{{{L("P", 0), {{"f", Value::boolean(false)},
                              {"n", Value::integer(0)},
                              {"x", Value::nil()},
                              {"y", Value::nil()}}}},
                {{"u", Value::location(L("P", 0))}}};
  GlobalState b = a;
  b.heap[L("P", 0)]["f"] = Value::boolean(true);
  BijectionResult r = canonical_bijection(ct, ct, a, b);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.path.find("u.f"), std::string::npos) << r.path;
}

TEST(ClientEquiv, Manifests) {
  const std::pair<const char*, Verdict> cases[] = {
      {"observer_v1_v3", Verdict::Equivalent},
      {"observer_v3_obj", Verdict::Equivalent},
      {"observer_obj_objsnt", Verdict::Equivalent},
      {"observer_v1_obj", Verdict::Equivalent},
      {"factory_factory_snt", Verdict::Equivalent},
      {"grouped_factory_snt", Verdict::Equivalent},
      {"version_v1_v2", Verdict::Equivalent},
      {"obool_v1_v2", Verdict::Equivalent},
      {"ms_v1_v2", Verdict::Equivalent},
      {"behav_getnext", Verdict::Equivalent},
      {"behav_istest", Verdict::Equivalent},
      {"obool_bad_exploit", Verdict::Distinguished},
  };
  for (const auto& [name, want] : cases) {
    SCOPED_TRACE(name);
    EquivResult r = client_equiv(load_manifest(oracle::manifest_path(name)));
    EXPECT_EQ(r.verdict, want) << r.text();
  }
}

TEST(ClientEquiv, ExploitAbortsOnOneSideOnly) {
  EquivResult r = client_equiv(load_manifest(oracle::manifest_path("obool_bad_exploit")));
  ASSERT_EQ(r.verdict, Verdict::Distinguished);
  bool a_abort = r.outcome_a.find("ExplicitAbort") != std::string::npos;
  bool b_abort = r.outcome_b.find("ExplicitAbort") != std::string::npos;
  EXPECT_NE(a_abort, b_abort) << r.outcome_a << " / " << r.outcome_b;
}

TEST(ClientEquiv, ManifestErrors) {
  EXPECT_THROW(parse_manifest("{}", "."), ManifestError);
  EXPECT_THROW(parse_manifest("not json", "."), ManifestError);
}

TEST(EquivalenceProperties, ReflexiveAndSymmetric) {
  ClassTable ct = oracle::bijection_table();
  std::mt19937 rng(3);
  for (int i = 0; i < 200; ++i) {
    GlobalState a = collect(oracle::random_state(ct, rng, 6));
    GlobalState b = i % 2 ? oracle::relabel(a, rng)
                          : collect(oracle::random_state(ct, rng, 6));
    EXPECT_TRUE(canonical_bijection(ct, ct, a, a).ok);
    EXPECT_EQ(canonical_bijection(ct, ct, a, b).ok,
              canonical_bijection(ct, ct, b, a).ok);
  }
}

TEST(EquivalenceProperties, AgreesWithBruteForce) {
  oracle::PropertyResult r = oracle::bijection_agreement(300, 9);
  EXPECT_TRUE(r.ok()) << r.first_failure;
}
