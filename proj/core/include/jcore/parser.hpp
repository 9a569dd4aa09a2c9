// SPDX-License-Identifier: Apache-2.0
//
// `.jcore` concrete syntax and the desugaring into core commands.

#ifndef JCORE_PARSER_HPP
#define JCORE_PARSER_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jcore/ast.hpp"

namespace jcore {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, Span span, std::string file = {})
      : std::runtime_error(file + (file.empty() ? "" : ":") + span.str() +
                           ": " + message),
        detail_(std::move(message)),
        span_(span),
        file_(std::move(file)) {}

  const std::string& detail() const { return detail_; }
  const Span& span() const { return span_; }
  const std::string& file() const { return file_; }

 private:
  std::string detail_;
  Span span_;
  std::string file_;
};

// Raised when a hoisted call has no resolvable static type.
class DesugarError : public ParseError {
 public:
  using ParseError::ParseError;
};

struct SurfaceProgram {
  std::vector<ClassDecl> classes;
  std::string file;
};

struct ParseOptions {
  // Accept `$`-prefixed identifiers (desugarer temporaries).
  bool allow_reserved = false;
};

SurfaceProgram parse(std::string_view text, std::string file = {},
                     ParseOptions options = {});

std::vector<ClassDecl> desugar(const SurfaceProgram& program);
// Desugars with extra classes visible for signature lookup (multi-file
// programs).
std::vector<ClassDecl> desugar(const std::vector<ClassDecl>& classes);

}  // namespace jcore

#endif  // JCORE_PARSER_HPP
