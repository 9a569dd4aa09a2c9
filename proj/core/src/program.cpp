// SPDX-License-Identifier: Apache-2.0

#include "jcore/program.hpp"

#include <fstream>
#include <sstream>

#include "jcore/parser.hpp"
#include "jcore/typechecker.hpp"

namespace jcore {

TypeCheckError::TypeCheckError(Report r)
    : std::runtime_error(r.diagnostics.empty()
                             ? std::string("type error")
                             : r.diagnostics.front().str()),
      report_(std::move(r)) {}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<ClassDecl> parse_sources(const std::vector<Source>& sources) {
  std::vector<ClassDecl> all;
  for (const Source& s : sources) {
    SurfaceProgram p = parse(s.text, s.name);
    for (ClassDecl& c : p.classes) all.push_back(std::move(c));
  }
  return desugar(all);
}

ClassTable load_sources(const std::vector<Source>& sources,
                        const Designations& d) {
  ClassTable ct = ClassTable::build(parse_sources(sources), d);
  Report r = check_table(ct);
  if (!r.ok()) throw TypeCheckError(std::move(r));
  return ct;
}

ClassTable load_program(const std::vector<std::string>& paths,
                        const Designations& d) {
  std::vector<Source> sources;
  for (const std::string& p : paths) sources.push_back({p, read_file(p)});
  return load_sources(sources, d);
}

ClassTable load_source(std::string_view text, const std::string& name,
                       const Designations& d) {
  return load_sources({{name, std::string(text)}}, d);
}

}  // namespace jcore
