// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "jcore/coupling.hpp"
#include "jcore/equivalence.hpp"
#include "jcore/interpreter.hpp"
#include "jcore/program.hpp"
#include "jcore/safety.hpp"
#include "jcore_tools/corpus.hpp"
#include "properties.hpp"

using namespace jcore;
using Clock = std::chrono::steady_clock;

namespace {

// Time limits in seconds.
constexpr double kCorpusLimit = 1.0;
constexpr double kEquivEachLimit = 1.0;
constexpr double kConfinementLimit = 10.0;
constexpr double kSimulationLimit = 30.0;

constexpr int kConfinementCases = 1000;
constexpr int kInterpreterCases = 1000;
constexpr int kMonotoneFuel = 32;
constexpr int kAllocatorCases = 1000;
constexpr int kBijectionCases = 500;

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

int failures = 0;

void report(int n, const std::string& name, const std::function<Verdict()>& body) {
  auto t0 = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.fail(std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (!v.pass) ++failures;
  std::printf("%s criterion %2d %-28s %7.3fs  %s\n", v.pass ? "PASS" : "FAIL", n,
              name.c_str(), secs, v.detail.c_str());
  std::fflush(stdout);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void from_property(Verdict& v, const oracle::PropertyResult& r, const std::string& what) {
  if (!r.ok()) {
    v.fail(what + ": " + std::to_string(r.failures) + "/" + std::to_string(r.cases) +
           " failed; " + r.first_failure);
  }
}

std::string cfile(const std::string& f) {
  return oracle::corpus_dir() + "/" + f + ".jcore";
}

int list_length(const std::string& state) {
  int n = 0;
  for (auto i = state.find("  Node@"); i != std::string::npos; i = state.find("  Node@", i + 1)) ++n;
  return n;
}

Verdict corpus_acceptance() {
  Verdict v;
  auto t0 = Clock::now();
  const std::set<std::string> rejected{"obool_bad_v1", "obool_bad_v2", "obool_bad_object",
                                       "obool_leak", "obool_setter", "rep_in_client"};
  int programs = 0;
  for (const auto& r : corpus::load_corpus(oracle::corpus_dir()).programs) {
    ++programs;
    for (const char* what : {"check", "analyze"}) {
      for (const auto& l : corpus::verify(r, what, Budget{})) {
        if (!l.pass) v.fail(l.program + " " + l.what + ": " + l.detail);
      }
    }
    if (r.analyze && r.analyze->empty() == rejected.count(r.name) > 0) {
      v.fail(r.name + " acceptance differs from the bad/leak split");
    }
  }
  Designations ob{"OBool", "Bool", ""};
  for (const char* bad : {"obool_bad_v1", "obool_bad_object"}) {
    Report rep = safe_table(load_program({cfile("bool"), cfile(bad)}, ob));
    if (!rep.has_rule(kOwnerPublicReturnsRep)) v.fail(std::string(bad) + " not rejected");
  }
  Report rep = safe_table(load_program(
      {cfile("observer_base"), cfile("observer_v1"), cfile("rep_in_client")},
      {"Observable", "Node", ""}));
  if (!rep.has_rule(kNewRepInClient)) v.fail("client new Node not rejected");
  double s = seconds_since(t0);
  if (s >= kCorpusLimit) v.fail("took " + std::to_string(s) + "s");
  if (v.pass) v.detail = std::to_string(programs) + " programs";
  return v;
}

Verdict behavioral_fixtures() {
  Verdict v;
  ClassTable obs = load_program({cfile("observer_base"), cfile("observer_v1"),
                                 cfile("observer_client")});
  RunResult r = run(obs, "Main", "main");
  if (!r.outcome.ok()) {
    v.fail("observer client: " + r.outcome.bottom().str());
  } else if (corpus::read_path(r.outcome.value(), "self.ob.count") != Value::integer(1)) {
    v.fail("observer client: ob.count != 1");
  }
  for (const char* ms : {"ms_v1", "ms_v2"}) {
    RunResult m = run(load_program({cfile("ms_client"), cfile(ms)}), "Main", "main");
    if (m.outcome.ok() || m.outcome.bottom().reason != BottomReason::ExplicitAbort) {
      v.fail(std::string(ms) + " did not abort");
    }
  }
  if (v.pass) v.detail = "ob.count = 1; both Meyer-Sieber versions abort";
  return v;
}

Verdict equivalence_verdicts() {
  Verdict v;
  const std::pair<const char*, jcore::Verdict> cases[] = {
      {"observer_v1_v3", jcore::Verdict::Equivalent},
      {"observer_v3_obj", jcore::Verdict::Equivalent},
      {"observer_obj_objsnt", jcore::Verdict::Equivalent},
      {"factory_factory_snt", jcore::Verdict::Equivalent},
      {"version_v1_v2", jcore::Verdict::Equivalent},
      {"obool_bad_exploit", jcore::Verdict::Distinguished},
  };
  double slowest = 0;
  for (const auto& [name, want] : cases) {
    EquivManifest m = load_manifest(oracle::manifest_path(name));
    if (m.budget.max_fuel != 1024) v.fail(std::string(name) + " maxFuel is not 1024");
    auto t0 = Clock::now();
    EquivResult r = client_equiv(m);
    double s = seconds_since(t0);
    slowest = std::max(slowest, s);
    if (r.verdict != want) {
      v.fail(std::string(name) + ": " + verdict_name(r.verdict) + ", want " + verdict_name(want));
    }
    if (s >= kEquivEachLimit) v.fail(std::string(name) + " took " + std::to_string(s) + "s");
  }
  if (v.pass) {
    std::ostringstream d;
    d << "6 manifests, slowest " << slowest << "s";
    v.detail = d.str();
  }
  return v;
}

Verdict known_limit() {
  Verdict v;
  CouplingReport r = test_simulation(load_sim_manifest(oracle::manifest_path("sim_observer_v1_obj")));
  if (r.passed()) {
    v.fail("loop against recursion passed");
    return v;
  }
  int longer = 0;
  for (const SimFailure& f : r.failures) {
    int len = list_length(f.state_a);
    if (len < f.fuel) v.fail(f.method + " failed at fuel " + std::to_string(f.fuel) +
                             " on a list of length " + std::to_string(len));
    if (len > f.fuel) ++longer;
  }
  if (longer == 0) v.fail("no failure with list length > fuel");
  if (v.pass) {
    v.detail = std::to_string(r.failure_count()) + " preservation failures, " +
               std::to_string(longer) + " with length > fuel";
  }
  return v;
}

Verdict confinement_procedure() {
  Verdict v;
  auto t0 = Clock::now();
  oracle::PropertyResult r = oracle::confinement_agreement(kConfinementCases, 20260101);
  double s = seconds_since(t0);
  from_property(v, r, "agreement");
  if (s >= kConfinementLimit) v.fail("took " + std::to_string(s) + "s");
  if (v.pass) v.detail = std::to_string(r.cases) + " heaps, " + r.note;
  return v;
}

Verdict soundness_differential() {
  Verdict v;
  oracle::PropertyResult r = oracle::monitor_differential();
  from_property(v, r, "monitor");
  if (v.pass) v.detail = std::to_string(r.cases) + " runs, " + r.note;
  return v;
}

Verdict interpreter_invariants() {
  Verdict v;
  oracle::PropertyResult inv = oracle::interpreter_invariants(kInterpreterCases, 424242);
  from_property(v, inv, "invariants");
  oracle::PropertyResult mono = oracle::fuel_monotonicity(kMonotoneFuel);
  from_property(v, mono, "monotonicity");
  if (v.pass) {
    v.detail = std::to_string(inv.cases) + " executions; " + std::to_string(mono.cases) +
               " entry points at fuels 1.." + std::to_string(kMonotoneFuel);
  }
  return v;
}

Verdict allocator_parametricity() {
  Verdict v;
  oracle::PropertyResult r = oracle::allocator_parametricity(kAllocatorCases, 777);
  from_property(v, r, "parametricity");
  if (v.pass) v.detail = std::to_string(r.cases) + " heap pairs";
  return v;
}

Verdict bijection_completeness() {
  Verdict v;
  oracle::PropertyResult r = oracle::bijection_agreement(kBijectionCases, 31337);
  from_property(v, r, "agreement");
  if (v.pass) v.detail = std::to_string(r.cases) + " state pairs, " + r.note;
  return v;
}

Verdict simulation_harness() {
  Verdict v;
  auto t0 = Clock::now();
  int states = 0;
  for (const char* m : {"sim_obool", "sim_ms", "sim_observer_v1_v3"}) {
    SimManifest sm = load_sim_manifest(oracle::manifest_path(m));
    if (sm.options.fuels != std::vector<int>{1, 2, 4, 8} || sm.options.max_script != 4) {
      v.fail(std::string(m) + " does not use fuels {1,2,4,8} and scripts <= 4");
    }
    CouplingReport r = test_simulation(sm);
    states += r.states;
    if (!r.passed()) v.fail(std::string(m) + ": " + std::to_string(r.failure_count()) + " failures");
    for (const MethodCoverage& c : r.coverage) {
      if (c.checks == 0) v.fail(std::string(m) + ": " + c.method + " never checked");
    }
  }
  CouplingReport bad = test_simulation(load_sim_manifest(oracle::manifest_path("sim_obool_bad")));
  bool counterexample = false;
  for (const SimFailure& f : bad.failures) {
    if (f.phase == SimPhase::Preservation && !f.script.empty()) counterexample = true;
  }
  if (!counterexample) v.fail("leak scenario produced no preservation counterexample");
  double s = seconds_since(t0);
  if (s >= kSimulationLimit) v.fail("took " + std::to_string(s) + "s");
  if (v.pass) {
    v.detail = "3 pairs pass over " + std::to_string(states) + " states; leak: " +
               std::to_string(bad.failure_count()) + " counterexamples";
  }
  return v;
}

}  // namespace

int main() {
  report(1, "corpus acceptance", corpus_acceptance);
  report(2, "behavioral fixtures", behavioral_fixtures);
  report(3, "equivalence verdicts", equivalence_verdicts);
  report(4, "known-limit negative test", known_limit);
  report(5, "confinement procedure", confinement_procedure);
  report(6, "soundness differential", soundness_differential);
  report(7, "interpreter invariants", interpreter_invariants);
  report(8, "allocator parametricity", allocator_parametricity);
  report(9, "bijection completeness", bijection_completeness);
  report(10, "simulation harness", simulation_harness);
  return failures;
}
