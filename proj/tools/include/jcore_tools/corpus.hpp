// SPDX-License-Identifier: Apache-2.0
//
// Corpus programs and their expected results.

#ifndef JCORE_TOOLS_CORPUS_HPP
#define JCORE_TOOLS_CORPUS_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jcore/class_table.hpp"
#include "jcore/interpreter.hpp"

namespace jcore::corpus {

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunExpectation {
  std::string entry_class = "Main";
  std::string entry_method = "main";
  std::string outcome;  // Ok or a bottom reason
  int min_fuel = 0;     // 0: not pinned
  // Access paths from the final store, e.g. self.ob.count.
  std::map<std::string, std::string> state;
};

struct ExpectationRecord {
  std::string name;
  std::vector<std::string> files;  // absolute
  Designations designations;
  std::string check = "ok";
  std::optional<std::vector<std::string>> analyze;  // expected rule ids
  std::optional<RunExpectation> run;
  std::optional<std::vector<std::string>> monitor;  // expected kinds
  std::string note;
};

struct Corpus {
  std::string dir;
  std::vector<ExpectationRecord> programs;
};

// Reads dir/expectations.json. Throws CorpusError.
Corpus load_corpus(const std::string& dir);
// Every *.jcore file in dir as a single-file program without expectations.
std::vector<ExpectationRecord> scan_extra(const std::string& dir);
// Built-in corpus directory.
std::string default_corpus_dir();

struct CheckLine {
  std::string program;
  std::string what;
  bool pass = false;
  std::string detail;
};

// what: check, analyze, run, monitor or all.
std::vector<CheckLine> verify(const ExpectationRecord& r,
                              const std::string& what, const Budget& budget);

// Result of "check": "ok" or the error kind.
std::string check_result(const ExpectationRecord& r);

// Follows field names from a store variable; nullopt if the path breaks.
std::optional<Value> read_path(const GlobalState& st, const std::string& path);

// Least fuel whose run is not FuelExhausted; 0 if none up to max_fuel.
int minimal_fuel(const ClassTable& ct, const std::string& entry_class,
                 const std::string& entry_method, const Budget& budget);

}  // namespace jcore::corpus

#endif  // JCORE_TOOLS_CORPUS_HPP
