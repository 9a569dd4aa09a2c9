// SPDX-License-Identifier: Apache-2.0

#include "lexer.hpp"

#include <array>
#include <cctype>

#include "jcore/parser.hpp"

namespace jcore::detail {

namespace {

constexpr std::array<std::string_view, 26> kKeywords = {
    "class", "extends", "con",   "module", "bool", "unit",  "int",
    "skip",  "abort",   "if",    "then",   "else", "fi",    "while",
    "do",    "od",      "new",   "in",     "super", "null", "true",
    "false", "it",      "is",    "mod",    "not"};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

bool is_keyword(std::string_view word) {
  for (std::string_view k : kKeywords) {
    if (k == word) return true;
  }
  return false;
}

std::vector<Token> lex(std::string_view text, const std::string& file,
                       bool allow_reserved) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.span.line = line;
    t.span.column = col;
    if (ident_start(c) || (c == '$' && allow_reserved)) {
      size_t j = i + 1;
      while (j < text.size() && ident_char(text[j])) ++j;
      t.text = std::string(text.substr(i, j - i));
      t.kind = is_keyword(t.text) ? Token::Kind::Keyword : Token::Kind::Ident;
      advance(j - i);
    } else if (c == '$') {
      throw ParseError("identifiers starting with '$' are reserved", t.span,
                       file);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = Token::Kind::Int;
      t.text = std::string(text.substr(i, j - i));
      if (t.text.size() > 18) {
        throw ParseError("integer literal too large", t.span, file);
      }
      t.value = std::stoll(t.text);
      advance(j - i);
    } else {
      static constexpr std::array<std::string_view, 3> kTwo = {":=", "==",
                                                                "!="};
      std::string_view two = text.substr(i, 2);
      bool matched = false;
      for (std::string_view p : kTwo) {
        if (two == p) {
          t.text = std::string(p);
          matched = true;
        }
      }
      if (!matched) {
        if (std::string_view("=<+-!.,;(){}").find(c) == std::string_view::npos) {
          throw ParseError(std::string("unexpected character '") + c + "'",
                           t.span, file);
        }
        t.text = std::string(1, c);
      }
      t.kind = Token::Kind::Punct;
      advance(t.text.size());
    }
    t.span.end_line = line;
    t.span.end_column = col;
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Token::Kind::End;
  end.span = {line, col, line, col};
  out.push_back(end);
  return out;
}

}  // namespace jcore::detail
