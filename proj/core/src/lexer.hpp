// SPDX-License-Identifier: Apache-2.0

#ifndef JCORE_SRC_LEXER_HPP
#define JCORE_SRC_LEXER_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "jcore/ast.hpp"

namespace jcore::detail {

struct Token {
  enum class Kind { Ident, Keyword, Int, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  std::int64_t value = 0;
  Span span;
};

bool is_keyword(std::string_view word);

// Throws ParseError.
std::vector<Token> lex(std::string_view text, const std::string& file,
                       bool allow_reserved);

}  // namespace jcore::detail

#endif  // JCORE_SRC_LEXER_HPP
