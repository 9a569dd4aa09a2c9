// SPDX-License-Identifier: Apache-2.0

#include <sstream>

#include "jcore/confinement.hpp"

namespace jcore {

namespace {

std::string quoted(const Location& l) { return "\"" + l.str() + "\""; }

}  // namespace

std::string to_dot(const ClassTable& ct, const Heap& h, const Partition& p) {
  (void)ct;
  std::ostringstream os;
  os << "digraph heap {\n";
  if (!h.empty()) os << "  node [shape=box];\n";
  for (std::size_t i = 0; i < p.islands.size(); ++i) {
    const Island& isl = p.islands[i];
    os << "  subgraph cluster_island_" << i << " {\n";
    os << "    label=\"island " << isl.owner.str() << "\";\n";
    os << "    style=dashed;\n";
    os << "    " << quoted(isl.owner) << " [style=bold];\n";
    for (const Location& r : isl.reps) os << "    " << quoted(r) << ";\n";
    os << "  }\n";
  }
  if (!p.clients.empty()) {
    os << "  subgraph cluster_clients {\n";
    os << "    label=\"clients\";\n";
    os << "    style=dashed;\n";
    for (const Location& c : p.clients) os << "    " << quoted(c) << ";\n";
    os << "  }\n";
  }
  for (const Location& r : p.flexible_reps) {
    os << "  " << quoted(r) << " [style=dotted];\n";
  }
  for (const auto& [l, obj] : h) {
    for (const auto& [f, v] : obj) {
      if (!v.is_loc()) continue;
      os << "  " << quoted(l) << " -> " << quoted(v.loc) << " [label=\"" << f
         << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace jcore
