// SPDX-License-Identifier: Apache-2.0

#include "jcore/parser.hpp"

#include "lexer.hpp"

namespace jcore {

namespace {

using detail::Token;

class Parser {
 public:
  Parser(std::vector<Token> toks, std::string file)
      : toks_(std::move(toks)), file_(std::move(file)) {}

  SurfaceProgram program() {
    SurfaceProgram p;
    p.file = file_;
    while (!at_end()) p.classes.push_back(class_decl());
    return p;
  }

 private:
  const Token& peek(size_t ahead = 0) const {
    size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool is(std::string_view text, size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return (t.kind == Token::Kind::Punct || t.kind == Token::Kind::Keyword) &&
           t.text == text;
  }
  bool is_ident(size_t ahead = 0) const {
    return peek(ahead).kind == Token::Kind::Ident;
  }
  Token take() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().span, file_);
  }
  Token expect(std::string_view text) {
    if (!is(text)) {
      fail("expected '" + std::string(text) + "' but found " + describe(peek()));
    }
    return take();
  }
  Token expect_ident(const char* what) {
    if (!is_ident()) {
      fail(std::string("expected ") + what + " but found " + describe(peek()));
    }
    return take();
  }
  static std::string describe(const Token& t) {
    if (t.kind == Token::Kind::End) return "end of input";
    return "'" + t.text + "'";
  }
  Span from(const Span& start) const {
    const Token& last = toks_[pos_ == 0 ? 0 : pos_ - 1];
    return {start.line, start.column, last.span.end_line, last.span.end_column};
  }

  bool type_start(size_t ahead = 0) const {
    return is_ident(ahead) || is("bool", ahead) || is("unit", ahead) ||
           is("int", ahead);
  }

  Type type() {
    if (is("bool")) { take(); return Type::boolean(); }
    if (is("unit")) { take(); return Type::unit(); }
    if (is("int")) { take(); return Type::integer(); }
    return Type::cls(expect_ident("a type").text);
  }

  ClassDecl class_decl() {
    Span start = expect("class").span;
    ClassDecl c;
    c.file = file_;
    c.name = expect_ident("a class name").text;
    expect("extends");
    c.super_name = expect_ident("a superclass name").text;
    expect("{");
    c.constructor = Stmt::skip();
    bool has_con = false;
    while (!is("}")) {
      if (at_end()) fail("unterminated class " + c.name);
      if (is("con")) {
        Span cs = take().span;
        if (has_con) throw ParseError("second constructor", cs, file_);
        has_con = true;
        expect("{");
        c.constructor = block();
        expect("}");
        continue;
      }
      Span ms = peek().span;
      bool module = false;
      if (is("module")) {
        take();
        module = true;
      }
      Type t = type();
      Token name = expect_ident("a member name");
      if (is(";") && !module) {
        take();
        c.fields.push_back({name.text, t, from(ms)});
        continue;
      }
      MethodDecl m;
      m.name = name.text;
      m.ret = t;
      m.module_scoped = module;
      expect("(");
      while (!is(")")) {
        if (!m.params.empty()) expect(",");
        Type pt = type();
        m.params.push_back({expect_ident("a parameter name").text, pt});
      }
      expect(")");
      expect("{");
      m.body = block();
      expect("}");
      m.span = from(ms);
      c.methods.push_back(std::move(m));
    }
    expect("}");
    c.span = from(start);
    return c;
  }

  bool block_end() const {
    return is("}") || is("else") || is("fi") || is("od") || at_end();
  }

  // A sequence up to the enclosing terminator. A declaration scopes over
  // the rest of the sequence.
  Stmt block() {
    Span start = peek().span;
    std::vector<Stmt> items;
    while (!block_end()) {
      if (is(";")) {
        take();
        continue;
      }
      if (type_start() && is_ident(1) && is(":=", 2)) {
        items.push_back(local_decl());
        break;
      }
      items.push_back(statement());
      if (!block_end()) expect(";");
    }
    return Stmt::seq(std::move(items), from(start));
  }

  Stmt local_decl() {
    Span start = peek().span;
    Stmt s;
    s.kind = Stmt::Kind::Local;
    s.type = type();
    s.var = expect_ident("a variable name").text;
    if (s.var == "self") fail("cannot declare self");
    expect(":=");
    s.exprs.push_back(expr());
    if (is("in") || is(";")) take();
    else if (!block_end()) fail("expected 'in' or ';' after declaration");
    s.body.push_back(block());
    s.span = from(start);
    return s;
  }

  Stmt statement() {
    Span start = peek().span;
    Stmt s;
    if (is("skip")) {
      take();
      s.kind = Stmt::Kind::Skip;
    } else if (is("abort")) {
      take();
      s.kind = Stmt::Kind::Abort;
    } else if (is("if")) {
      take();
      s.kind = Stmt::Kind::If;
      s.exprs.push_back(expr());
      expect("then");
      s.body.push_back(block());
      if (is("else")) {
        take();
        s.body.push_back(block());
      } else {
        s.body.push_back(Stmt::skip(peek().span));
      }
      expect("fi");
    } else if (is("while")) {
      take();
      s.kind = Stmt::Kind::While;
      s.exprs.push_back(expr());
      expect("do");
      s.body.push_back(block());
      expect("od");
    } else if (is("{")) {
      take();
      Stmt inner = block();
      expect("}");
      return inner;
    } else {
      Expr lhs = expr();
      if (is(":=")) {
        take();
        if (lhs.kind == Expr::Kind::Var) {
          if (lhs.name == "self") {
            throw ParseError("self is not assignable", lhs.span, file_);
          }
          s.var = lhs.name;
          Expr rhs = expr();
          if (rhs.kind == Expr::Kind::New) {
            s.kind = Stmt::Kind::New;
            s.name = rhs.name;
          } else if (rhs.kind == Expr::Kind::Call) {
            s.kind = Stmt::Kind::Call;
            s.name = rhs.name;
            s.exprs = std::move(rhs.kids);
          } else if (rhs.kind == Expr::Kind::SuperCall) {
            s.kind = Stmt::Kind::SuperCall;
            s.name = rhs.name;
            s.exprs = std::move(rhs.kids);
          } else {
            s.kind = Stmt::Kind::Assign;
            s.exprs.push_back(std::move(rhs));
          }
        } else if (lhs.kind == Expr::Kind::Field) {
          s.kind = Stmt::Kind::FieldAssign;
          s.name = lhs.name;
          s.exprs.push_back(std::move(lhs.kids[0]));
          s.exprs.push_back(expr());
        } else {
          throw ParseError("left side of ':=' must be a variable or field",
                           lhs.span, file_);
        }
      } else if (lhs.kind == Expr::Kind::Call ||
                 lhs.kind == Expr::Kind::SuperCall) {
        s.kind = lhs.kind == Expr::Kind::Call ? Stmt::Kind::Call
                                              : Stmt::Kind::SuperCall;
        s.name = lhs.name;
        s.exprs = std::move(lhs.kids);
      } else {
        throw ParseError("expected a statement", lhs.span, file_);
      }
    }
    s.span = from(start);
    return s;
  }

  Expr make(Expr::Kind k, std::vector<Expr> kids, Span start,
            std::string name = {}) {
    Expr e;
    e.kind = k;
    e.kids = std::move(kids);
    e.name = std::move(name);
    e.span = from(start);
    return e;
  }

  Expr expr() {
    Span start = peek().span;
    Expr l = is_expr();
    if (is("=") || is("==")) {
      take();
      return make(Expr::Kind::Eq, {std::move(l), is_expr()}, start);
    }
    if (is("!=")) {
      take();
      Expr eq = make(Expr::Kind::Eq, {std::move(l), is_expr()}, start);
      return make(Expr::Kind::Not, {std::move(eq)}, start);
    }
    if (is("<")) {
      take();
      return make(Expr::Kind::Lt, {std::move(l), is_expr()}, start);
    }
    return l;
  }

  Expr is_expr() {
    Span start = peek().span;
    Expr e = additive();
    if (is("is")) {
      take();
      std::string c = expect_ident("a class name").text;
      return make(Expr::Kind::Is, {std::move(e)}, start, c);
    }
    return e;
  }

  Expr additive() {
    Span start = peek().span;
    Expr e = multiplicative();
    while (is("+") || is("-")) {
      Expr::Kind k = take().text == "+" ? Expr::Kind::Add : Expr::Kind::Sub;
      e = make(k, {std::move(e), multiplicative()}, start);
    }
    return e;
  }

  Expr multiplicative() {
    Span start = peek().span;
    Expr e = unary();
    while (is("mod")) {
      take();
      e = make(Expr::Kind::Mod, {std::move(e), unary()}, start);
    }
    return e;
  }

  bool primary_start(size_t ahead) const {
    const Token& t = peek(ahead);
    if (t.kind == Token::Kind::Ident || t.kind == Token::Kind::Int) return true;
    if (t.kind == Token::Kind::Keyword) {
      return t.text == "null" || t.text == "true" || t.text == "false" ||
             t.text == "it" || t.text == "super";
    }
    return t.kind == Token::Kind::Punct && t.text == "(";
  }

  Expr unary() {
    Span start = peek().span;
    if (is("!") || is("not")) {
      take();
      return make(Expr::Kind::Not, {unary()}, start);
    }
    if (is("-") && peek(1).kind == Token::Kind::Int) {
      take();
      Expr e = make(Expr::Kind::IntLit, {}, start);
      e.value = -take().value;
      e.span = from(start);
      return e;
    }
    if (is("(") && is_ident(1) && is(")", 2) && primary_start(3)) {
      take();
      std::string c = take().text;
      take();
      return make(Expr::Kind::Cast, {unary()}, start, c);
    }
    return postfix();
  }

  std::vector<Expr> args() {
    std::vector<Expr> out;
    expect("(");
    while (!is(")")) {
      if (!out.empty()) expect(",");
      out.push_back(expr());
    }
    expect(")");
    return out;
  }

  Expr postfix() {
    Span start = peek().span;
    Expr e = primary();
    while (is(".")) {
      take();
      std::string name = expect_ident("a field or method name").text;
      if (is("(")) {
        std::vector<Expr> kids{std::move(e)};
        for (Expr& a : args()) kids.push_back(std::move(a));
        e = make(Expr::Kind::Call, std::move(kids), start, name);
      } else {
        e = make(Expr::Kind::Field, {std::move(e)}, start, name);
      }
    }
    return e;
  }

  Expr primary() {
    Span start = peek().span;
    const Token& t = peek();
    if (t.kind == Token::Kind::Int) {
      Expr e = make(Expr::Kind::IntLit, {}, start);
      e.value = take().value;
      e.span = from(start);
      return e;
    }
    if (is("null")) { take(); return make(Expr::Kind::Null, {}, start); }
    if (is("true")) { take(); return make(Expr::Kind::True, {}, start); }
    if (is("false")) { take(); return make(Expr::Kind::False, {}, start); }
    if (is("it")) { take(); return make(Expr::Kind::UnitLit, {}, start); }
    if (is("new")) {
      take();
      std::string c = expect_ident("a class name").text;
      // Tolerate the Java-style `new C()`.
      if (is("(") && is(")", 1)) {
        take();
        take();
      }
      return make(Expr::Kind::New, {}, start, c);
    }
    if (is("super")) {
      take();
      expect(".");
      std::string m = expect_ident("a method name").text;
      return make(Expr::Kind::SuperCall, args(), start, m);
    }
    if (is("(")) {
      take();
      Expr e = expr();
      expect(")");
      return e;
    }
    if (t.kind == Token::Kind::Ident) {
      Token id = take();
      if (is("(")) {
        std::vector<Expr> kids{Expr::var("self", id.span)};
        for (Expr& a : args()) kids.push_back(std::move(a));
        return make(Expr::Kind::Call, std::move(kids), start, id.text);
      }
      return Expr::var(id.text, id.span);
    }
    fail("expected an expression but found " + describe(t));
  }

  std::vector<Token> toks_;
  std::string file_;
  size_t pos_ = 0;
};

}  // namespace

SurfaceProgram parse(std::string_view text, std::string file,
                     ParseOptions options) {
  Parser p(detail::lex(text, file, options.allow_reserved), file);
  return p.program();
}

}  // namespace jcore
