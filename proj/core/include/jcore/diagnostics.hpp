// SPDX-License-Identifier: Apache-2.0

#ifndef JCORE_DIAGNOSTICS_HPP
#define JCORE_DIAGNOSTICS_HPP

#include <string>
#include <vector>

#include "jcore/ast.hpp"

namespace jcore {

// A rule violation attributed to a source location.
struct Diagnostic {
  std::string rule;
  std::string message;
  Span span;
  std::string file;
  std::string class_name;
  std::string method;

  // file:line:col: rule: message [in C.m]
  std::string str() const;
  std::string json() const;
  bool operator<(const Diagnostic& o) const;
  bool operator==(const Diagnostic& o) const;
};

struct Report {
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
  bool has_rule(const std::string& rule) const;
  std::vector<std::string> rules() const;
};

}  // namespace jcore

#endif  // JCORE_DIAGNOSTICS_HPP
