// Property runners shared by the unit suites and the acceptance binary.

#ifndef JCORE_TESTS_PROPERTIES_HPP
#define JCORE_TESTS_PROPERTIES_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "jcore/class_table.hpp"
#include "jcore_tools/corpus.hpp"

namespace jcore::oracle {

struct PropertyResult {
  int cases = 0;
  int failures = 0;
  std::string first_failure;
  std::string note;  // extra counts for the report line

  bool ok() const { return cases > 0 && failures == 0; }
  void fail(const std::string& why) {
    if (failures++ == 0) first_failure = why;
  }
};

std::string source_dir();
std::string corpus_dir();
std::string manifest_path(const std::string& name);

// Records whose check expectation is ok, with their loaded tables.
std::vector<std::pair<corpus::ExpectationRecord, ClassTable>> loaded_corpus();

// Nullary methods of instantiable client classes.
std::vector<std::pair<std::string, std::string>> entry_points(
    const ClassTable& ct);

PropertyResult confinement_agreement(int cases, std::uint32_t seed);
PropertyResult bijection_agreement(int cases, std::uint32_t seed);
PropertyResult allocator_parametricity(int cases, std::uint32_t seed);
PropertyResult interpreter_invariants(int cases, std::uint32_t seed);
PropertyResult fuel_monotonicity(int max_fuel);
// Accepted programs stay clean under the every-command monitor; the leak
// program reports ClientToRep.
PropertyResult monitor_differential();

}  // namespace jcore::oracle

#endif  // JCORE_TESTS_PROPERTIES_HPP
