#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "tyloc/ast.hpp"

namespace tyloc {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(int ln, int c, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(ln) + ":" +
                           std::to_string(c) + ": " + msg),
        line(ln),
        col(c) {}
};

struct UnboundVariable : std::runtime_error {
  int line, col;
  std::string var;
  UnboundVariable(int ln, int c, const std::string& n)
      : std::runtime_error("unbound variable '" + n + "' at " +
                           std::to_string(ln) + ":" + std::to_string(c)),
        line(ln),
        col(c),
        var(n) {}
};

namespace lex {

enum class Tok {
  Let,
  In,
  Fun,
  Arrow,
  If,
  Then,
  Else,
  True,
  False,
  Int,
  Str,
  Ident,
  LParen,
  RParen,
  Comma,
  Plus,
  Equal,
  Hole,
  Wild,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  long long int_val = 0;
  int line = 1, col = 1;
};

inline std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto bump = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      bump(c);
      ++i;
      continue;
    }
    if (c == '(' && i + 1 < src.size() && src[i + 1] == '*') {
      int startl = line, startc = col;
      int depth = 0;
      while (i < src.size()) {
        if (src[i] == '(' && i + 1 < src.size() && src[i + 1] == '*') {
          depth++;
          bump(src[i]);
          bump(src[i + 1]);
          i += 2;
        } else if (src[i] == '*' && i + 1 < src.size() && src[i + 1] == ')') {
          depth--;
          bump(src[i]);
          bump(src[i + 1]);
          i += 2;
          if (depth == 0) break;
        } else {
          bump(src[i]);
          ++i;
        }
      }
      if (depth != 0) throw ParseError(startl, startc, "unterminated comment");
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      t.kind = Tok::Int;
      t.text = src.substr(i, j - i);
      t.int_val = std::stoll(t.text);
      col += static_cast<int>(j - i);
      i = j;
      out.push_back(t);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) ||
              src[j] == '_' || src[j] == '\''))
        ++j;
      t.text = src.substr(i, j - i);
      col += static_cast<int>(j - i);
      i = j;
      if (t.text == "let")
        t.kind = Tok::Let;
      else if (t.text == "in")
        t.kind = Tok::In;
      else if (t.text == "fun")
        t.kind = Tok::Fun;
      else if (t.text == "if")
        t.kind = Tok::If;
      else if (t.text == "then")
        t.kind = Tok::Then;
      else if (t.text == "else")
        t.kind = Tok::Else;
      else if (t.text == "true")
        t.kind = Tok::True;
      else if (t.text == "false")
        t.kind = Tok::False;
      else if (t.text == "_")
        t.kind = Tok::Wild;
      else
        t.kind = Tok::Ident;
      out.push_back(t);
      continue;
    }
    if (c == '"') {
      size_t j = i + 1;
      std::string val;
      int startl = line, startc = col;
      bump(c);
      while (j < src.size() && src[j] != '"') {
        char d = src[j];
        if (d == '\\' && j + 1 < src.size()) {
          char e = src[j + 1];
          if (e == 'n')
            val += '\n';
          else if (e == 't')
            val += '\t';
          else if (e == '\\')
            val += '\\';
          else if (e == '"')
            val += '"';
          else
            throw ParseError(line, col, "bad escape in string literal");
          bump(d);
          bump(e);
          j += 2;
          continue;
        }
        val += d;
        bump(d);
        ++j;
      }
      if (j >= src.size())
        throw ParseError(startl, startc, "unterminated string literal");
      bump('"');
      i = j + 1;
      t.kind = Tok::Str;
      t.text = val;
      out.push_back(t);
      continue;
    }
    switch (c) {
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case ',': t.kind = Tok::Comma; break;
      case '+': t.kind = Tok::Plus; break;
      case '=': t.kind = Tok::Equal; break;
      case '?': t.kind = Tok::Hole; break;
      case '-':
        if (i + 1 < src.size() && src[i + 1] == '>') {
          t.kind = Tok::Arrow;
          bump('-');
          bump('>');
          i += 2;
          out.push_back(t);
          continue;
        }
        throw ParseError(line, col, "unexpected '-'");
      default:
        throw ParseError(line, col, std::string("unexpected character '") + c +
                                        "'");
    }
    bump(c);
    ++i;
    out.push_back(t);
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

}  // namespace lex

namespace detail {

class Parser {
 public:
  explicit Parser(std::vector<lex::Token> toks) : toks_(std::move(toks)) {}

  Expr program() {
    struct TopLet {
      std::string name;
      std::vector<Binder> params;
      Expr def;
      Span span;
    };
    std::vector<TopLet> tops;
    // Top-level `let x ... = e` bindings (no `in`). A binding followed by
    // `in` belongs to the final expression instead.
    while (peek().kind == lex::Tok::Let) {
      size_t save = pos_;
      Span sp = span_of(peek());
      next();
      TopLet tl;
      tl.span = sp;
      tl.name = binding_name();
      while (starts_param()) tl.params.push_back(param());
      expect(lex::Tok::Equal, "'='");
      tl.def = expr();
      if (peek().kind == lex::Tok::In) {
        pos_ = save;
        break;
      }
      tops.push_back(std::move(tl));
    }
    if (peek().kind == lex::Tok::End) {
      const auto& t = peek();
      throw ParseError(t.line, t.col,
                       "expected a final expression after definitions");
    }
    Expr body = expr();
    expect(lex::Tok::End, "end of input");
    for (auto it = tops.rbegin(); it != tops.rend(); ++it) {
      Expr def = wrap_params(it->params, std::move(it->def));
      body = make_let(it->name, std::move(def), std::move(body), it->span);
    }
    return body;
  }

 private:
  std::vector<lex::Token> toks_;
  size_t pos_ = 0;

  static Span span_of(const lex::Token& t) { return Span{t.line, t.col}; }
  const lex::Token& peek(size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  const lex::Token& next() { return toks_[pos_++]; }
  void expect(lex::Tok k, const char* what) {
    if (peek().kind != k) {
      const auto& t = peek();
      throw ParseError(t.line, t.col,
                       std::string("expected ") + what + ", found '" +
                           (t.kind == lex::Tok::End ? "<eof>" : t.text.empty()
                                ? describe(t.kind)
                                : t.text) +
                           "'");
    }
    next();
  }
  static const char* describe(lex::Tok k) {
    switch (k) {
      case lex::Tok::LParen: return "(";
      case lex::Tok::RParen: return ")";
      case lex::Tok::Comma: return ",";
      case lex::Tok::Plus: return "+";
      case lex::Tok::Equal: return "=";
      case lex::Tok::Hole: return "?";
      case lex::Tok::Arrow: return "->";
      default: return "token";
    }
  }

  std::string binding_name() {
    const auto& t = peek();
    if (t.kind == lex::Tok::Ident) {
      next();
      return t.text;
    }
    if (t.kind == lex::Tok::Wild) {
      next();
      return "_";
    }
    throw ParseError(t.line, t.col, "expected a name to bind");
  }

  bool starts_param() const {
    lex::Tok k = peek().kind;
    if (k == lex::Tok::Ident || k == lex::Tok::Wild) return true;
    // `(a, b)` or `(a, b, c)` tuple pattern
    if (k == lex::Tok::LParen &&
        (peek(1).kind == lex::Tok::Ident || peek(1).kind == lex::Tok::Wild) &&
        peek(2).kind == lex::Tok::Comma)
      return true;
    return false;
  }

  Binder param() {
    Binder b;
    const auto& t = peek();
    if (t.kind == lex::Tok::Ident || t.kind == lex::Tok::Wild) {
      next();
      b.names.push_back(t.kind == lex::Tok::Wild ? "_" : t.text);
      return b;
    }
    expect(lex::Tok::LParen, "a parameter");
    b.tuple = true;
    b.names.push_back(binding_name());
    expect(lex::Tok::Comma, "','");
    b.names.push_back(binding_name());
    if (peek().kind == lex::Tok::Comma) {
      next();
      b.names.push_back(binding_name());
    }
    expect(lex::Tok::RParen, "')'");
    return b;
  }

  static Expr wrap_params(const std::vector<Binder>& params, Expr body) {
    for (auto it = params.rbegin(); it != params.rend(); ++it) {
      Span sp = body.span;
      body = make_lambda(*it, std::move(body), sp);
    }
    return body;
  }

  Expr expr() {
    const auto& t = peek();
    switch (t.kind) {
      case lex::Tok::Let: {
        Span sp = span_of(next());
        std::string name = binding_name();
        std::vector<Binder> params;
        while (starts_param()) params.push_back(param());
        expect(lex::Tok::Equal, "'='");
        Expr def = expr();
        expect(lex::Tok::In, "'in'");
        Expr body = expr();
        return make_let(name, wrap_params(params, std::move(def)),
                        std::move(body), sp);
      }
      case lex::Tok::Fun: {
        Span sp = span_of(next());
        std::vector<Binder> params;
        if (!starts_param()) {
          const auto& u = peek();
          throw ParseError(u.line, u.col, "expected parameter after 'fun'");
        }
        while (starts_param()) params.push_back(param());
        expect(lex::Tok::Arrow, "'->'");
        Expr body = expr();
        Expr out = wrap_params(params, std::move(body));
        out.span = sp;
        return out;
      }
      case lex::Tok::If: {
        Span sp = span_of(next());
        Expr c = expr();
        expect(lex::Tok::Then, "'then'");
        Expr th = expr();
        expect(lex::Tok::Else, "'else'");
        Expr el = expr();
        return make_cond(std::move(c), std::move(th), std::move(el), sp);
      }
      default:
        return additive();
    }
  }

  // A token in column 1 starts a new top-level item; application and infix
  // absorption never cross it.
  bool at_line_start() const { return peek().col == 1; }

  Expr additive() {
    Expr lhs = application();
    while (peek().kind == lex::Tok::Plus && !at_line_start()) {
      Span psp = span_of(next());
      Expr rhs = application();
      Span lsp = lhs.span;
      Expr op = make_var("+", psp);
      lhs = make_app(make_app(std::move(op), std::move(lhs), psp),
                     std::move(rhs), lsp);
    }
    return lhs;
  }

  bool starts_atom() const {
    switch (peek().kind) {
      case lex::Tok::Int:
      case lex::Tok::Str:
      case lex::Tok::True:
      case lex::Tok::False:
      case lex::Tok::Ident:
      case lex::Tok::Hole:
      case lex::Tok::LParen:
        return true;
      default:
        return false;
    }
  }

  Expr application() {
    Expr fn = atom();
    while (starts_atom() && !at_line_start()) {
      Span sp = fn.span;
      Expr arg = atom();
      fn = make_app(std::move(fn), std::move(arg), sp);
    }
    return fn;
  }

  Expr atom() {
    const auto& t = peek();
    switch (t.kind) {
      case lex::Tok::Int: next(); return make_int(t.int_val, span_of(t));
      case lex::Tok::Str: next(); return make_str(t.text, span_of(t));
      case lex::Tok::True: next(); return make_bool(true, span_of(t));
      case lex::Tok::False: next(); return make_bool(false, span_of(t));
      case lex::Tok::Ident: next(); return make_var(t.text, span_of(t));
      case lex::Tok::Hole: next(); return make_hole(span_of(t));
      case lex::Tok::Wild:
        throw ParseError(t.line, t.col,
                         "'_' cannot be used as an expression");
      case lex::Tok::LParen: {
        Span sp = span_of(next());
        if (peek().kind == lex::Tok::Plus &&
            peek(1).kind == lex::Tok::RParen) {
          Span psp = span_of(next());
          next();
          return make_var("+", psp);
        }
        Expr first = expr();
        if (peek().kind == lex::Tok::Comma) {
          std::vector<Expr> parts;
          parts.push_back(std::move(first));
          while (peek().kind == lex::Tok::Comma) {
            next();
            parts.push_back(expr());
          }
          if (parts.size() > 3) {
            throw ParseError(sp.line, sp.col,
                             "tuples of arity 2 or 3 only");
          }
          expect(lex::Tok::RParen, "')'");
          return make_tuple(std::move(parts), sp);
        }
        expect(lex::Tok::RParen, "')'");
        return first;
      }
      default:
        throw ParseError(t.line, t.col, "expected an expression");
    }
  }
};

inline void check_bound(const Expr& e, std::vector<std::string>& bound,
                        const std::vector<std::string>& builtins) {
  if (e.kind == ExprKind::Var) {
    if (std::find(bound.rbegin(), bound.rend(), e.name) == bound.rend() &&
        std::find(builtins.begin(), builtins.end(), e.name) ==
            builtins.end()) {
      throw UnboundVariable(e.span.line, e.span.col, e.name);
    }
    return;
  }
  size_t pushed = 0;
  if (e.kind == ExprKind::Lambda) {
    for (const auto& n : e.binder.names)
      if (n != "_") {
        bound.push_back(n);
        ++pushed;
      }
  }
  for (size_t i = 0; i < e.children.size(); ++i) {
    if (e.kind == ExprKind::Let && i == 1) {
      bound.push_back(e.name);
      ++pushed;
    }
    check_bound(e.children[i], bound, builtins);
  }
  bound.resize(bound.size() - pushed);
}

}  // namespace detail

// Parses a program: zero or more top-level `let` bindings followed by a
// final expression. Builtins `+` and `int_of_string` are pre-bound.
inline Expr parse(const std::string& text,
                  const std::vector<std::string>& builtins = {
                      "+", "int_of_string"}) {
  detail::Parser p(lex::tokenize(text));
  Expr e = p.program();
  std::vector<std::string> bound;
  detail::check_bound(e, bound, builtins);
  return e;
}

}  // namespace tyloc
