// SPDX-License-Identifier: Apache-2.0
//
// Comparable class tables, state equivalence up to a typed location
// bijection, and client program equivalence.

#ifndef JCORE_EQUIVALENCE_HPP
#define JCORE_EQUIVALENCE_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jcore/class_table.hpp"
#include "jcore/interpreter.hpp"
#include "jcore/values.hpp"

namespace jcore {

// Finite, injective, loctype-preserving.
class TypedBijection {
 public:
  // False (and no change) when the pair breaks typing or bijectivity.
  bool add(const Location& a, const Location& b);
  bool consistent(const Location& a, const Location& b) const;
  std::optional<Location> forward(const Location& a) const;
  std::optional<Location> backward(const Location& b) const;
  bool empty() const { return fwd_.empty(); }
  std::size_t size() const { return fwd_.size(); }
  std::vector<std::pair<Location, Location>> pairs() const;
  bool is_identity() const;
  bool operator==(const TypedBijection&) const = default;

 private:
  std::map<Location, Location> fwd_;
  std::map<Location, Location> bwd_;
};

struct ComparabilityError {
  std::string member;
  std::string message;
  std::string str() const { return member + ": " + message; }
};

std::optional<ComparabilityError> check_comparable(const ClassTable& a,
                                                   const ClassTable& b);

// Copies classes declared on one side only (never the owner class) into the
// other so both tables have the same class names.
void align_declarations(std::vector<ClassDecl>& a, std::vector<ClassDecl>& b,
                        const std::string& own);

struct BijectionResult {
  bool ok = false;
  TypedBijection sigma;
  std::string path;    // first mismatching access path
  std::string reason;  // what differed there
};

struct TraversalOptions {
  // Pair owner and rep locations without comparing their fields.
  bool opaque_islands = false;
};

// Rooted breadth-first construction of the bijection, extending initial.
BijectionResult canonical_bijection(const ClassTable& ct_a,
                                    const ClassTable& ct_b,
                                    const GlobalState& a, const GlobalState& b,
                                    const TypedBijection& initial = {},
                                    TraversalOptions options = {});

// Value equivalence of two values at sigma (locations related by sigma,
// primitives equal).
bool value_related(const TypedBijection& sigma, const Value& a,
                   const Value& b);

// Whether any reachable location is an owner.
bool owner_free(const ClassTable& ct, const GlobalState& st);

enum class Verdict { Equivalent, Distinguished, OwnersReachable, Inconclusive };
const char* verdict_name(Verdict v);

struct EquivResult {
  Verdict verdict = Verdict::Inconclusive;
  TypedBijection sigma;
  int fuel = 0;
  std::string entry;
  std::string witness;
  std::string outcome_a;
  std::string outcome_b;

  std::string json() const;
  std::string text() const;
};

struct EquivManifest {
  std::vector<std::string> table_a;
  std::vector<std::string> table_b;
  std::string own;
  std::string rep_a;
  std::string rep_b;
  std::string entry_class = "Main";
  std::string entry_method = "main";
  Budget budget;
};

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Paths in the manifest are relative to its directory.
EquivManifest load_manifest(const std::string& path);
EquivManifest parse_manifest(const std::string& json_text,
                             const std::string& base_dir);

// Designations shared by both sides of a comparison.
Designations comparison_designations(const EquivManifest& m);

struct ComparedTables {
  ClassTable a;
  ClassTable b;
};

// Loads, aligns, typechecks both tables; throws on load errors and
// ManifestError on incomparable tables.
ComparedTables load_compared(const EquivManifest& m);

EquivResult client_equiv(const ClassTable& a, const ClassTable& b,
                         const std::string& entry_class,
                         const std::string& entry_method,
                         const Budget& budget);
EquivResult client_equiv(const EquivManifest& m);

}  // namespace jcore

#endif  // JCORE_EQUIVALENCE_HPP
