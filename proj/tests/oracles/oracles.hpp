// Brute-force reference implementations and random generators for the
// property suites. Nothing here calls the procedure it checks.

#ifndef JCORE_TESTS_ORACLES_HPP
#define JCORE_TESTS_ORACLES_HPP

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "jcore/class_table.hpp"
#include "jcore/values.hpp"

namespace jcore::oracle {

// rep location -> owner location
using RepAssignment = std::map<Location, Location>;

// The four no-reference clauses for one complete assignment of reps.
bool partition_confining(const ClassTable& ct, const Heap& h,
                         const RepAssignment& a);

// Tries every assignment of reps to owners.
bool brute_confined(const ClassTable& ct, const Heap& h,
                    RepAssignment* witness = nullptr);

// Some typed bijection between the collected domains makes the collected
// states equal.
bool brute_equivalent(const GlobalState& a, const GlobalState& b);

// Least index of cls not used in h, by scanning.
Location least_unused(const std::string& cls, const Heap& h);

// Roles O/OS (owner), R/RS (rep), K (client); Own = O, Rep = R.
ClassTable confinement_table();
Heap random_heap(const ClassTable& ct, std::mt19937& rng, int max_objects);

// Client-only table (classes P, Q) and Own-free states over it.
ClassTable bijection_table();
GlobalState random_state(const ClassTable& ct, std::mt19937& rng,
                         int max_objects);
// Copy with every location renamed by a per-class permutation of indices.
GlobalState relabel(const GlobalState& s, std::mt19937& rng);
// Flips one primitive, redirects one pointer or rebinds one variable.
GlobalState mutate(const ClassTable& ct, const GlobalState& s,
                   std::mt19937& rng);

}  // namespace jcore::oracle

#endif  // JCORE_TESTS_ORACLES_HPP
