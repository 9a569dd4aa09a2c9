// SPDX-License-Identifier: Apache-2.0

#include "jcore_tools/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "jcore/confinement.hpp"
#include "jcore/coupling.hpp"
#include "jcore/equivalence.hpp"
#include "jcore/parser.hpp"
#include "jcore/program.hpp"
#include "jcore/safety.hpp"
#include "jcore_tools/corpus.hpp"
#include "json.hpp"

namespace jcore::cli {

namespace {

struct Config {
  std::vector<std::string> inputs;
  std::string own;
  std::string rep;
  std::string rep2;
  int max_fuel = Budget{}.max_fuel;
  int loop_cap = Budget{}.loop_cap;
  std::string monitor = "off";
  std::string format = "text";
  std::string dot;
  std::string entry = "Main.main";
  bool trace = false;
  std::string coupling;
  std::string corpus_dir;
  std::string extra_dir;
  std::string what = "all";

  Designations designations() const { return {own, rep, rep2}; }
  Budget budget() const { return {max_fuel, loop_cap}; }
  bool json() const { return format == "json"; }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::pair<std::string, std::string> split_entry(const std::string& e) {
  auto dot = e.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == e.size()) {
    throw UsageError("--entry must look like Class.method");
  }
  return {e.substr(0, dot), e.substr(dot + 1)};
}

void require_designations(const Config& c) {
  if (c.own.empty() || c.rep.empty()) {
    throw UsageError("--own and --rep are required");
  }
}

nlohmann::json state_json(const GlobalState& st) {
  nlohmann::json store = nlohmann::json::object();
  for (const auto& [x, v] : st.store) store[x] = v.str();
  nlohmann::json heap = nlohmann::json::object();
  for (const auto& [l, obj] : st.heap) {
    nlohmann::json o = nlohmann::json::object();
    for (const auto& [f, v] : obj) o[f] = v.str();
    heap[l.str()] = o;
  }
  return {{"store", store}, {"heap", heap}};
}

// Load errors print as diagnostics and yield exit 1.
int load_error(const Config& c, std::ostream& out, std::ostream& err,
               const std::function<void()>& body) {
  auto emit = [&](const std::string& kind, const std::string& text) {
    if (c.json()) {
      out << nlohmann::json{{"error", kind}, {"message", text}}.dump() << "\n";
    } else {
      err << text << "\n";
    }
  };
  try {
    body();
    return 0;
  } catch (const TypeCheckError& e) {
    for (const Diagnostic& d : e.report().diagnostics) {
      if (c.json()) {
        out << d.json() << "\n";
      } else {
        out << d.str() << "\n";
      }
    }
    if (!c.json()) out << e.report().diagnostics.size() << " type errors\n";
    return 1;
  } catch (const DesugarError& e) {
    emit("DesugarError", std::string("DesugarError: ") + e.what());
  } catch (const ParseError& e) {
    emit("ParseError", std::string("ParseError: ") + e.what());
  } catch (const WellFormednessError& e) {
    std::string where = e.file().empty() ? "" : e.file() + ":" + e.span().str() + ": ";
    emit(e.kind(), where + e.what());
  } catch (const EntryClassError& e) {
    emit("EntryClassError", std::string("EntryClassError: ") + e.what());
  } catch (const ManifestError& e) {
    emit("ManifestError", std::string("ManifestError: ") + e.what());
  }
  return 1;
}

int do_check(const Config& c, std::ostream& out, std::ostream& err) {
  int n = 0;
  int rc = load_error(c, out, err, [&] {
    n = static_cast<int>(load_program(c.inputs, c.designations()).class_names().size());
  });
  if (rc != 0) return rc;
  if (c.json()) {
    out << nlohmann::json{{"ok", true}, {"classes", n}}.dump() << "\n";
  } else {
    out << "ok: " << n << " classes\n";
  }
  return 0;
}

int do_analyze(const Config& c, std::ostream& out, std::ostream& err) {
  require_designations(c);
  Report r;
  int rc = load_error(c, out, err, [&] {
    r = safe_table(load_program(c.inputs, c.designations()));
  });
  if (rc != 0) return rc;
  for (const Diagnostic& d : r.diagnostics) {
    out << (c.json() ? d.json() : d.str()) << "\n";
  }
  if (c.json()) {
    out << nlohmann::json{{"safe", r.ok()},
                          {"diagnostics", r.diagnostics.size()}}
               .dump()
        << "\n";
  } else {
    out << (r.ok() ? "safe" : std::to_string(r.diagnostics.size()) +
                                  " safety diagnostics")
        << "\n";
  }
  return r.ok() ? 0 : 1;
}

MonitorMode monitor_mode(const std::string& s) {
  if (s == "off") return MonitorMode::Off;
  if (s == "calls") return MonitorMode::Calls;
  if (s == "every") return MonitorMode::Every;
  throw UsageError("--monitor must be off, calls or every");
}

bool write_dot(const ClassTable& ct, const GlobalState& final_state,
               const std::string& path, std::ostream& out, std::ostream& err) {
  GlobalState g = collect(final_state);
  PartitionResult p = confine_heap(ct, g.heap);
  if (auto* v = std::get_if<ConfinementViolation>(&p)) {
    err << "final heap is not confined: " << v->str() << "\n";
    return false;
  }
  std::string dot = to_dot(ct, g.heap, std::get<Partition>(p));
  if (path.empty() || path == "-") {
    out << dot;
    return true;
  }
  std::ofstream f(path);
  if (!f) {
    err << "cannot write " << path << "\n";
    return false;
  }
  f << dot;
  return true;
}

int do_run(const Config& c, bool dot_only, std::ostream& out,
           std::ostream& err) {
  MonitorMode mode = monitor_mode(c.monitor);
  auto [cls, method] = split_entry(c.entry);
  if (dot_only) require_designations(c);
  std::optional<ClassTable> ct;
  MonitorResult res;
  int rc = load_error(c, out, err, [&] {
    ct = load_program(c.inputs, c.designations());
    RunOptions o;
    o.budget = c.budget();
    o.trace = c.trace;
    res = run_with_monitor(*ct, cls, method, mode, o);
  });
  if (rc != 0) return rc;
  const Outcome<GlobalState>& oc = res.run.outcome;
  if (dot_only) {
    if (!oc.ok()) {
      err << "run ended in " << oc.bottom().str() << "\n";
      return 1;
    }
    return write_dot(*ct, oc.value(), c.dot, out, err) ? 0 : 1;
  }
  if (c.json()) {
    nlohmann::json j{{"entry", c.entry},
                     {"outcome", oc.ok() ? "Ok" : bottom_name(oc.bottom().reason)},
                     {"fuel", res.run.fuel}};
    if (oc.ok()) {
      j["state"] = state_json(collect(oc.value()));
    } else {
      j["detail"] = oc.bottom().str();
    }
    nlohmann::json vs = nlohmann::json::array();
    for (const auto& v : res.violations) vs.push_back(nlohmann::json::parse(v.json()));
    j["monitor"] = c.monitor;
    j["violations"] = vs;
    if (c.trace) j["trace"] = res.run.trace;
    out << j.dump() << "\n";
  } else {
    if (c.trace) {
      for (const std::string& t : res.run.trace) out << t << "\n";
    }
    out << "outcome: " << (oc.ok() ? std::string("Ok") : oc.bottom().str()) << "\n";
    out << "fuel: " << res.run.fuel << "\n";
    if (oc.ok()) out << pretty_state(*ct, collect(oc.value()));
    if (mode != MonitorMode::Off) {
      out << "violations: " << res.violations.size() << "\n";
      for (const auto& v : res.violations) out << "  " << v.str() << "\n";
    }
  }
  if (!c.dot.empty() && oc.ok() && !write_dot(*ct, oc.value(), c.dot, out, err)) {
    return 1;
  }
  return oc.ok() && res.violations.empty() ? 0 : 1;
}

int do_equiv(const Config& c, std::ostream& out, std::ostream& err) {
  if (c.inputs.size() != 1) throw UsageError("equiv takes one manifest");
  EquivManifest m;
  try {
    m = load_manifest(c.inputs[0]);
  } catch (const ManifestError& e) {
    err << "ManifestError: " << e.what() << "\n";
    return 2;
  }
  if (c.max_fuel != Budget{}.max_fuel) m.budget.max_fuel = c.max_fuel;
  if (c.loop_cap != Budget{}.loop_cap) m.budget.loop_cap = c.loop_cap;
  EquivResult r;
  int rc = load_error(c, out, err, [&] {
    r = client_equiv(m);
  });
  if (rc != 0) return rc;
  out << (c.json() ? r.json() + "\n" : r.text());
  return r.verdict == Verdict::Equivalent ? 0 : 1;
}

int do_simtest(const Config& c, std::ostream& out, std::ostream& err) {
  if (c.inputs.size() != 1) throw UsageError("simtest takes one manifest");
  SimManifest m;
  try {
    m = load_sim_manifest(c.inputs[0]);
  } catch (const ManifestError& e) {
    err << "ManifestError: " << e.what() << "\n";
    return 2;
  }
  if (!c.coupling.empty()) m.coupling = c.coupling;
  if (!builtin_coupling(m.coupling)) {
    err << "unknown coupling " << m.coupling << "; builtins:";
    for (const auto& n : builtin_coupling_names()) err << " " << n;
    err << "\n";
    return 2;
  }
  CouplingReport r;
  int rc = load_error(c, out, err, [&] {
    r = test_simulation(m);
  });
  if (rc != 0) return rc;
  out << (c.json() ? r.json() + "\n" : r.text());
  return r.passed() ? 0 : 1;
}

int do_corpus(const Config& c, const std::string& action, std::ostream& out,
              std::ostream& err) {
  corpus::Corpus cp;
  std::vector<corpus::ExpectationRecord> extra;
  try {
    cp = corpus::load_corpus(c.corpus_dir.empty() ? corpus::default_corpus_dir()
                                                  : c.corpus_dir);
    if (!c.extra_dir.empty()) extra = corpus::scan_extra(c.extra_dir);
  } catch (const corpus::CorpusError& e) {
    err << e.what() << "\n";
    return 2;
  }
  if (action == "list") {
    for (const auto* set : {&cp.programs, &extra}) {
      for (const auto& r : *set) {
        if (c.json()) {
          out << nlohmann::json{{"name", r.name},
                                {"files", r.files},
                                {"own", r.designations.own},
                                {"rep", r.designations.rep},
                                {"rep2", r.designations.rep2},
                                {"note", r.note}}
                     .dump()
              << "\n";
        } else {
          out << r.name;
          for (const auto& f : r.files) {
            out << " " << std::filesystem::path(f).filename().string();
          }
          out << "\n";
        }
      }
    }
    return 0;
  }
  int failed = 0;
  int total = 0;
  for (const auto& r : cp.programs) {
    for (const auto& l : corpus::verify(r, c.what, c.budget())) {
      ++total;
      if (!l.pass) ++failed;
      if (c.json()) {
        out << nlohmann::json{{"program", l.program},
                              {"check", l.what},
                              {"pass", l.pass},
                              {"detail", l.detail}}
                   .dump()
            << "\n";
      } else {
        out << (l.pass ? "PASS " : "FAIL ") << l.program << " " << l.what
            << ": " << l.detail << "\n";
      }
    }
  }
  if (!c.json()) out << (total - failed) << "/" << total << " expectations met\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  Config c;
  CLI::App app{"jcore: confinement and representation independence toolkit"};
  app.require_subcommand(1);
  auto common = [&](CLI::App* s, bool files) {
    if (files) s->add_option("inputs", c.inputs, "Source files")->required();
    s->add_option("--own", c.own, "Owner class");
    s->add_option("--rep", c.rep, "Rep class");
    s->add_option("--rep2", c.rep2, "Second rep class");
    s->add_option("--max-fuel", c.max_fuel, "Fuel bound")->check(CLI::PositiveNumber);
    s->add_option("--loop-cap", c.loop_cap, "Loop iteration cap")->check(CLI::PositiveNumber);
    s->add_option("--format", c.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
  };
  auto* check = app.add_subcommand("check", "Parse, desugar, typecheck");
  common(check, true);
  auto* analyze = app.add_subcommand("analyze", "Static safety analysis");
  common(analyze, true);
  auto* runc = app.add_subcommand("run", "Interpret an entry method");
  common(runc, true);
  runc->add_option("--entry", c.entry, "Class.method");
  runc->add_option("--monitor", c.monitor, "off, calls or every")
      ->check(CLI::IsMember({"off", "calls", "every"}));
  runc->add_option("--dot", c.dot, "Write the final island graph");
  runc->add_flag("--trace", c.trace, "Print the call trace");
  auto* dot = app.add_subcommand("dot", "Island graph of the final state");
  common(dot, true);
  dot->add_option("--entry", c.entry, "Class.method");
  dot->add_option("--dot,-o", c.dot, "Output path (default stdout)");
  auto* equiv = app.add_subcommand("equiv", "Compare two tables on a client");
  common(equiv, true);
  auto* sim = app.add_subcommand("simtest", "Bounded simulation test");
  common(sim, true);
  sim->add_option("--coupling", c.coupling, "Builtin coupling name");
  auto* corp = app.add_subcommand("corpus", "Corpus programs");
  corp->require_subcommand(1);
  corp->add_option("--corpus", c.corpus_dir, "Corpus directory");
  corp->add_option("--extra", c.extra_dir, "Extra directory of programs");
  corp->add_option("--format", c.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  auto* list = corp->add_subcommand("list", "List programs");
  auto* run_all = corp->add_subcommand("run-all", "Check all expectations");
  run_all->add_option("--only", c.what, "check, analyze, run, monitor or all")
      ->check(CLI::IsMember({"check", "analyze", "run", "monitor", "all"}));
  run_all->add_option("--max-fuel", c.max_fuel, "Fuel bound")->check(CLI::PositiveNumber);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << "run with --help for usage\n";
    return 2;
  }
  try {
    if (check->parsed()) return do_check(c, out, err);
    if (analyze->parsed()) return do_analyze(c, out, err);
    if (runc->parsed()) return do_run(c, false, out, err);
    if (dot->parsed()) return do_run(c, true, out, err);
    if (equiv->parsed()) return do_equiv(c, out, err);
    if (sim->parsed()) return do_simtest(c, out, err);
    if (corp->parsed()) return do_corpus(c, list->parsed() ? "list" : "run-all", out, err);
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

int dispatch(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, out, err);
}

}  // namespace jcore::cli
