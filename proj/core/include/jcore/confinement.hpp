// SPDX-License-Identifier: Apache-2.0
//
// Confining partitions of heaps, confined stores, partition extension, and a
// dynamic monitor over the interpreter.

#ifndef JCORE_CONFINEMENT_HPP
#define JCORE_CONFINEMENT_HPP

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "jcore/class_table.hpp"
#include "jcore/interpreter.hpp"
#include "jcore/values.hpp"

namespace jcore {

enum class ViolationKind {
  ClientToRep,
  SharedRep,
  NonPrivateOwnerEdge,
  RepEscapesIsland,
  RepWithoutOwner,
  StoreViolation,
  ExtensionViolation,
  ResultViolation,
};
const char* violation_name(ViolationKind k);

struct ConfinementViolation {
  ViolationKind kind = ViolationKind::ClientToRep;
  // Offending locations; for edges, source then target.
  std::vector<Location> witness;
  // Field of an offending edge, or variable of an offending store entry.
  std::string field;
  std::string context;
  Span span;

  std::string str() const;
  std::string json() const;
  bool operator==(const ConfinementViolation& o) const;
};

struct Island {
  Location owner;
  std::set<Location> reps;  // forced members
};

struct Partition {
  std::vector<Island> islands;  // ordered by owner location
  std::set<Location> clients;
  std::set<Location> flexible_reps;
  // Connected rep components not forced into any island.
  std::vector<std::set<Location>> flexible_components;

  // Index of the island holding l as owner or forced rep.
  std::optional<std::size_t> island_of(const Location& l) const;
  std::optional<std::size_t> island_of_owner(const Location& o) const;
};

using PartitionResult = std::variant<Partition, ConfinementViolation>;

// Decides whether h has a confining partition and returns the canonical one.
PartitionResult confine_heap(const ClassTable& ct, const Heap& h);

// Store confinement for class cls. Flexible reps may be placed in any island.
std::optional<ConfinementViolation> confined_store(const ClassTable& ct,
                                                   const std::string& cls,
                                                   const Store& eta,
                                                   const Heap& h,
                                                   const Partition& p);

// Whether the confining partitions of the post heap extend p.
std::optional<ConfinementViolation> check_hext(const ClassTable& ct,
                                               const Partition& pre,
                                               const Heap& post);

// Island graph, deterministic.
std::string to_dot(const ClassTable& ct, const Heap& h, const Partition& p);

enum class MonitorMode { Off, Calls, Every };

struct MonitorResult {
  RunResult run;
  std::vector<ConfinementViolation> violations;
};

// Runs like run() and records confinement violations without stopping.
MonitorResult run_with_monitor(const ClassTable& ct,
                               const std::string& entry_class,
                               const std::string& entry_method,
                               MonitorMode mode, RunOptions options = {});

// Observer that performs the monitor checks; exposed for the harnesses.
class ConfinementMonitor : public ExecObserver {
 public:
  ConfinementMonitor(const ClassTable& ct, MonitorMode mode);

  void after_command(const std::string& cls, const std::string& method,
                     const Stmt& s, const Heap& h, const Store& st) override;
  void on_call(const CallEvent& ev) override;
  void on_return(const ReturnEvent& ev) override;
  bool wants_pre_heap() const override { return mode_ != MonitorMode::Off; }

  const std::vector<ConfinementViolation>& violations() const {
    return violations_;
  }
  void clear() { violations_.clear(); }

 private:
  void report(ConfinementViolation v, const Span& span,
              const std::string& context);
  std::optional<Partition> heap_ok(const Heap& h, const Span& span,
                                   const std::string& context);

  const ClassTable& ct_;
  MonitorMode mode_;
  std::vector<ConfinementViolation> violations_;
};

}  // namespace jcore

#endif  // JCORE_CONFINEMENT_HPP
