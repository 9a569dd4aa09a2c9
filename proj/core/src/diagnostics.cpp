// SPDX-License-Identifier: Apache-2.0

#include "jcore/diagnostics.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "json.hpp"

namespace jcore {

std::string Diagnostic::str() const {
  std::string out;
  if (!file.empty()) out += file + ":";
  out += std::to_string(span.line) + ":" + std::to_string(span.column) + ": ";
  out += rule + ": " + message;
  if (!class_name.empty()) {
    out += " [in " + class_name;
    if (!method.empty()) out += "." + method;
    out += "]";
  }
  return out;
}

std::string Diagnostic::json() const {
  nlohmann::json j{{"rule", rule},
                   {"message", message},
                   {"file", file},
                   {"line", span.line},
                   {"column", span.column},
                   {"class", class_name},
                   {"method", method}};
  return j.dump();
}

bool Diagnostic::operator<(const Diagnostic& o) const {
  return std::tie(file, span.line, span.column, rule, message) <
         std::tie(o.file, o.span.line, o.span.column, o.rule, o.message);
}

bool Diagnostic::operator==(const Diagnostic& o) const {
  return rule == o.rule && message == o.message && file == o.file &&
         span.line == o.span.line && span.column == o.span.column;
}

bool Report::has_rule(const std::string& rule) const {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [&](const Diagnostic& d) { return d.rule == rule; });
}

std::vector<std::string> Report::rules() const {
  std::set<std::string> s;
  for (const Diagnostic& d : diagnostics) s.insert(d.rule);
  return {s.begin(), s.end()};
}

}  // namespace jcore
