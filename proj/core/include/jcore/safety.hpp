// SPDX-License-Identifier: Apache-2.0
//
// Syntax-directed safety analysis; a safe table is confined.

#ifndef JCORE_SAFETY_HPP
#define JCORE_SAFETY_HPP

#include <vector>

#include "jcore/class_table.hpp"
#include "jcore/diagnostics.hpp"

namespace jcore {

// Rule ids.
inline constexpr const char* kNewRepInClient = "NewRepInClient";
inline constexpr const char* kNewOwnerInRep = "NewOwnerInRep";
inline constexpr const char* kNonSelfPrivateAccess = "NonSelfPrivateAccess";
inline constexpr const char* kSubOwnerRepAccess = "SubOwnerRepAccess";
inline constexpr const char* kRepLeakViaCall = "RepLeakViaCall";
inline constexpr const char* kRepArgToForeignOwner = "RepArgToForeignOwner";
inline constexpr const char* kOwnerArgToRep = "OwnerArgToRep";
inline constexpr const char* kModuleScopeViolation = "ModuleScopeViolation";
inline constexpr const char* kOwnerPublicReturnsRep = "OwnerPublicReturnsRep";
inline constexpr const char* kOwnerInheritsRepParams = "OwnerInheritsRepParams";
inline constexpr const char* kRepInheritsForeign = "RepInheritsForeign";

// Expressions and commands are assumed well typed; the result is empty when
// safe.
std::vector<Diagnostic> safe_expr(const ClassTable& ct,
                                  const TypingContext& gamma, const Expr& e);
std::vector<Diagnostic> safe_command(const ClassTable& ct,
                                     const TypingContext& gamma,
                                     const Stmt& s);

// Whole-table check; diagnostics sorted and deduplicated.
Report safe_table(const ClassTable& ct);

}  // namespace jcore

#endif  // JCORE_SAFETY_HPP
