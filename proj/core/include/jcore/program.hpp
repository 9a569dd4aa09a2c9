// SPDX-License-Identifier: Apache-2.0
//
// Loading: read, parse, desugar, build the class table, typecheck.

#ifndef JCORE_PROGRAM_HPP
#define JCORE_PROGRAM_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jcore/class_table.hpp"
#include "jcore/diagnostics.hpp"

namespace jcore {

class TypeCheckError : public std::runtime_error {
 public:
  explicit TypeCheckError(Report r);
  const Report& report() const { return report_; }

 private:
  Report report_;
};

// Throws std::runtime_error when the file cannot be read.
std::string read_file(const std::string& path);

struct Source {
  std::string name;
  std::string text;
};

// Parses every source and desugars them together.
std::vector<ClassDecl> parse_sources(const std::vector<Source>& sources);

// Throws ParseError, DesugarError, WellFormednessError or TypeCheckError.
ClassTable load_sources(const std::vector<Source>& sources,
                        const Designations& d = {});
ClassTable load_program(const std::vector<std::string>& paths,
                        const Designations& d = {});
ClassTable load_source(std::string_view text,
                       const std::string& name = "<input>",
                       const Designations& d = {});

}  // namespace jcore

#endif  // JCORE_PROGRAM_HPP
