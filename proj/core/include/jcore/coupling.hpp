// SPDX-License-Identifier: Apache-2.0
//
// Basic couplings between corresponding islands of two comparable tables,
// the coupling they induce on whole heaps, and a bounded simulation harness.

#ifndef JCORE_COUPLING_HPP
#define JCORE_COUPLING_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "jcore/class_table.hpp"
#include "jcore/equivalence.hpp"
#include "jcore/values.hpp"

namespace jcore {

// One island as a sub-heap: the owner and its reps. Pointers out of it may
// dangle.
struct IslandView {
  const ClassTable* ct = nullptr;
  Location owner;
  Heap heap;
};

using CouplingPredicate = std::function<bool(
    const TypedBijection&, const IslandView&, const IslandView&)>;

struct BasicCoupling {
  std::string name;
  std::string target;  // corpus pair it was written for
  CouplingPredicate holds;
};

struct ShapeError {
  int clause = 0;
  std::string message;
  std::string str() const;
};

std::optional<ShapeError> check_island_shape(const ClassTable& ct_a,
                                             const ClassTable& ct_b,
                                             const TypedBijection& sigma,
                                             const IslandView& a,
                                             const IslandView& b);

struct CouplingFailure {
  int island = 0;  // 1-based; 0 when not about an island
  std::optional<Location> location;
  std::string message;
  std::string str() const;
};

std::optional<CouplingFailure> induced_heap_coupling(const ClassTable& ct_a,
                                                     const ClassTable& ct_b,
                                                     const TypedBijection& sigma,
                                                     const Heap& a,
                                                     const Heap& b,
                                                     const BasicCoupling& bc);

enum class SimPhase { Establishment, Preservation };
const char* phase_name(SimPhase p);

struct SimFailure {
  SimPhase phase = SimPhase::Preservation;
  std::string method;
  int fuel = 0;
  std::vector<std::string> script;  // replays the failing step last
  std::string detail;
  std::string state_a;  // pre-states
  std::string state_b;
};

struct MethodCoverage {
  SimPhase phase = SimPhase::Preservation;
  std::string method;
  int vectors = 0;  // related pre-state pairs
  int checks = 0;   // vectors times fuels
  int failures = 0;
};

struct CouplingReport {
  std::string coupling;
  std::vector<int> fuels;
  int max_script = 0;
  int states = 0;  // related state pairs explored
  std::vector<MethodCoverage> coverage;
  std::vector<SimFailure> failures;  // capped; coverage counts all

  bool passed() const;
  int failure_count() const;
  std::string json() const;
  std::string text() const;
};

struct SimOptions {
  // Environment indices: a method body is run with nested calls at fuel i,
  // i.e. the method is invoked at fuel i + 1.
  std::vector<int> fuels{1, 2, 4, 8};
  int max_script = 4;
  int loop_cap = 100000;
  std::size_t max_failures = 200;
};

// Scripts of owner calls (and calls on leaked reps) from Own-free seeds,
// replayed on both sides. Never throws for program behavior.
CouplingReport test_simulation(const ClassTable& ct_a, const ClassTable& ct_b,
                               const BasicCoupling& bc,
                               const SimOptions& options = {});

enum class IdentityStatus { Ok, Fail, Precondition };

struct IdentityExtension {
  IdentityStatus status = IdentityStatus::Ok;
  TypedBijection sigma;
  std::string path;
  std::string reason;
};

IdentityExtension identity_extension_check(const ClassTable& ct_a,
                                           const ClassTable& ct_b,
                                           const TypedBijection& sigma,
                                           const GlobalState& a,
                                           const GlobalState& b);

// Builtins: obool-negation, ms-even, observer-list.
std::optional<BasicCoupling> builtin_coupling(const std::string& name);
std::vector<std::string> builtin_coupling_names();

struct SimManifest {
  EquivManifest tables;
  std::string coupling;
  SimOptions options;
};

SimManifest load_sim_manifest(const std::string& path);
SimManifest parse_sim_manifest(const std::string& json_text,
                               const std::string& base_dir);
CouplingReport test_simulation(const SimManifest& m);

}  // namespace jcore

#endif  // JCORE_COUPLING_HPP
