// SPDX-License-Identifier: Apache-2.0

#include "jcore_tools/corpus.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <set>

#include "jcore/confinement.hpp"
#include "jcore/parser.hpp"
#include "jcore/program.hpp"
#include "jcore/safety.hpp"
#include "json.hpp"

namespace jcore::corpus {

namespace fs = std::filesystem;

std::string default_corpus_dir() {
  if (const char* env = std::getenv("JCORE_CORPUS")) return env;
#ifdef JCORE_CORPUS_DIR
  return JCORE_CORPUS_DIR;
#else
  return "corpus";
#endif
}

namespace {

std::vector<std::string> strings(const nlohmann::json& j) {
  std::vector<std::string> out;
  for (const auto& s : j) out.push_back(s.get<std::string>());
  std::sort(out.begin(), out.end());
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const std::string& s : v) out += (out.empty() ? "" : ",") + s;
  return out.empty() ? "none" : out;
}

}  // namespace

Corpus load_corpus(const std::string& dir) {
  fs::path base(dir);
  fs::path file = base / "expectations.json";
  if (!fs::exists(file)) {
    throw CorpusError("no corpus at " + dir + " (missing expectations.json)");
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(file.string()));
  } catch (const std::exception& e) {
    throw CorpusError(std::string("cannot read expectations: ") + e.what());
  }
  Corpus c;
  c.dir = dir;
  try {
    for (const auto& p : j.at("programs")) {
      ExpectationRecord r;
      r.name = p.at("name").get<std::string>();
      for (const auto& f : p.at("files")) {
        r.files.push_back((base / f.get<std::string>()).string());
      }
      r.designations.own = p.value("own", std::string());
      r.designations.rep = p.value("rep", std::string());
      r.designations.rep2 = p.value("rep2", std::string());
      r.check = p.value("check", std::string("ok"));
      if (p.contains("analyze")) r.analyze = strings(p["analyze"]);
      if (p.contains("monitor")) r.monitor = strings(p["monitor"]);
      if (p.contains("run")) {
        const auto& rj = p["run"];
        RunExpectation e;
        std::string entry = rj.value("entry", std::string("Main.main"));
        auto dot = entry.find('.');
        e.entry_class = entry.substr(0, dot);
        e.entry_method = dot == std::string::npos ? "main" : entry.substr(dot + 1);
        e.outcome = rj.at("outcome").get<std::string>();
        e.min_fuel = rj.value("minFuel", 0);
        if (rj.contains("state")) {
          for (const auto& [k, v] : rj["state"].items()) {
            e.state[k] = v.get<std::string>();
          }
        }
        r.run = e;
      }
      r.note = p.value("note", std::string());
      c.programs.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw CorpusError(std::string("bad expectations: ") + e.what());
  }
  return c;
}

std::vector<ExpectationRecord> scan_extra(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    throw CorpusError("not a directory: " + dir);
  }
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".jcore") {
      files.push_back(e.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<ExpectationRecord> out;
  for (const std::string& f : files) {
    ExpectationRecord r;
    r.name = fs::path(f).stem().string();
    r.files = {f};
    out.push_back(std::move(r));
  }
  return out;
}

std::string check_result(const ExpectationRecord& r) {
  try {
    load_program(r.files, r.designations);
    return "ok";
  } catch (const DesugarError&) {
    return "DesugarError";
  } catch (const ParseError&) {
    return "ParseError";
  } catch (const WellFormednessError& e) {
    return e.kind();
  } catch (const TypeCheckError&) {
    return "TypeCheckError";
  } catch (const std::runtime_error&) {
    return "IoError";
  }
}

std::optional<Value> read_path(const GlobalState& st, const std::string& path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto dot = path.find('.', start);
    parts.push_back(path.substr(start, dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  auto it = st.store.find(parts[0]);
  if (it == st.store.end()) return std::nullopt;
  Value v = it->second;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (!v.is_loc()) return std::nullopt;
    auto o = st.heap.find(v.loc);
    if (o == st.heap.end()) return std::nullopt;
    auto f = o->second.find(parts[i]);
    if (f == o->second.end()) return std::nullopt;
    v = f->second;
  }
  return v;
}

int minimal_fuel(const ClassTable& ct, const std::string& entry_class,
                 const std::string& entry_method, const Budget& budget) {
  for (int f = 1; f <= budget.max_fuel; ++f) {
    RunOptions o;
    o.budget = budget;
    o.fixed_fuel = f;
    if (!run(ct, entry_class, entry_method, o).outcome.fuel_exhausted()) {
      return f;
    }
  }
  return 0;
}

std::vector<CheckLine> verify(const ExpectationRecord& r,
                              const std::string& what, const Budget& budget) {
  std::vector<CheckLine> out;
  bool all = what == "all";
  auto line = [&](std::string w, bool pass, std::string detail) {
    out.push_back({r.name, std::move(w), pass, std::move(detail)});
  };
  std::string checked = check_result(r);
  if (all || what == "check") {
    line("check", checked == r.check, "expected " + r.check + ", got " + checked);
  }
  if (checked != "ok") return out;
  ClassTable ct = load_program(r.files, r.designations);
  if ((all || what == "analyze") && r.analyze) {
    std::vector<std::string> got = safe_table(ct).rules();
    std::sort(got.begin(), got.end());
    got.erase(std::unique(got.begin(), got.end()), got.end());
    line("analyze", got == *r.analyze,
         "expected " + join(*r.analyze) + ", got " + join(got));
  }
  if ((all || what == "run") && r.run) {
    const RunExpectation& e = *r.run;
    RunOptions o;
    o.budget = budget;
    RunResult rr = run(ct, e.entry_class, e.entry_method, o);
    std::string got = rr.outcome.ok() ? "Ok" : bottom_name(rr.outcome.bottom().reason);
    line("run", got == e.outcome, "expected " + e.outcome + ", got " + got);
    if (rr.outcome.ok()) {
      for (const auto& [path, want] : e.state) {
        auto v = read_path(rr.outcome.value(), path);
        std::string have = v ? v->str() : "<missing>";
        line("run " + path, have == want, "expected " + want + ", got " + have);
      }
    }
    if (e.min_fuel > 0) {
      int f = minimal_fuel(ct, e.entry_class, e.entry_method, budget);
      line("minFuel", f == e.min_fuel,
           "expected " + std::to_string(e.min_fuel) + ", got " +
               std::to_string(f));
    }
  }
  if ((all || what == "monitor") && r.monitor && r.run) {
    RunOptions o;
    o.budget = budget;
    MonitorResult m = run_with_monitor(ct, r.run->entry_class,
                                       r.run->entry_method, MonitorMode::Every, o);
    std::set<std::string> kinds;
    for (const ConfinementViolation& v : m.violations) {
      kinds.insert(violation_name(v.kind));
    }
    std::vector<std::string> got(kinds.begin(), kinds.end());
    line("monitor", got == *r.monitor,
         "expected " + join(*r.monitor) + ", got " + join(got));
  }
  return out;
}

}  // namespace jcore::corpus
