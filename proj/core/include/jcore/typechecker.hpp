// SPDX-License-Identifier: Apache-2.0
//
// Typing of expressions, commands, constructors, methods and whole tables.

#ifndef JCORE_TYPECHECKER_HPP
#define JCORE_TYPECHECKER_HPP

#include <variant>
#include <vector>

#include "jcore/ast.hpp"
#include "jcore/class_table.hpp"
#include "jcore/diagnostics.hpp"

namespace jcore {

using TypeResult = std::variant<Type, Diagnostic>;

// Synthesizes the unique type of e.
TypeResult type_of_expr(const ClassTable& ct, const TypingContext& gamma,
                        const Expr& e);

// Empty when S is well typed.
std::vector<Diagnostic> check_command(const ClassTable& ct,
                                      const TypingContext& gamma,
                                      const Stmt& s);

Report check_table(const ClassTable& ct);

// Context of a method body: parameters, self and result.
TypingContext method_context(const ClassTable& ct, const std::string& cls,
                             const MethodDecl& m);

}  // namespace jcore

#endif  // JCORE_TYPECHECKER_HPP
