#pragma once

#include <sstream>
#include <string>

#include "tyloc/ast.hpp"

namespace tyloc {

namespace detail {

inline std::string escape_str(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      default: out += c;
    }
  }
  return out;
}

// Precedence: 0 let/fun/if, 1 infix +, 2 application, 3 atoms.
inline void print_expr(std::ostream& os, const Expr& e, int prec) {
  auto paren = [&](int own, auto&& body) {
    if (own < prec) os << '(';
    body();
    if (own < prec) os << ')';
  };
  switch (e.kind) {
    case ExprKind::Var:
      if (e.name == "+")
        os << "(+)";
      else
        os << e.name;
      break;
    case ExprKind::IntLit: os << e.int_val; break;
    case ExprKind::BoolLit: os << (e.bool_val ? "true" : "false"); break;
    case ExprKind::StrLit: os << '"' << escape_str(e.str_val) << '"'; break;
    case ExprKind::Hole: os << '?'; break;
    case ExprKind::Tuple: {
      os << '(';
      for (size_t i = 0; i < e.children.size(); ++i) {
        if (i) os << ", ";
        print_expr(os, e.children[i], 0);
      }
      os << ')';
      break;
    }
    case ExprKind::Lambda:
      paren(0, [&] {
        os << "fun ";
        if (e.binder.tuple) {
          os << '(';
          for (size_t i = 0; i < e.binder.names.size(); ++i) {
            if (i) os << ", ";
            os << e.binder.names[i];
          }
          os << ')';
        } else {
          os << e.binder.names[0];
        }
        os << " -> ";
        print_expr(os, e.children[0], 0);
      });
      break;
    case ExprKind::App: {
      // Render `(+) a b` back as infix.
      const Expr& fn = e.children[0];
      if (fn.kind == ExprKind::App && fn.children[0].kind == ExprKind::Var &&
          fn.children[0].name == "+") {
        paren(1, [&] {
          print_expr(os, fn.children[1], 1);
          os << " + ";
          print_expr(os, e.children[1], 2);
        });
      } else {
        paren(2, [&] {
          print_expr(os, e.children[0], 2);
          os << ' ';
          print_expr(os, e.children[1], 3);
        });
      }
      break;
    }
    case ExprKind::Cond:
      paren(0, [&] {
        os << "if ";
        print_expr(os, e.children[0], 0);
        os << " then ";
        print_expr(os, e.children[1], 0);
        os << " else ";
        print_expr(os, e.children[2], 0);
      });
      break;
    case ExprKind::Let:
      paren(0, [&] {
        os << "let " << e.name << " = ";
        print_expr(os, e.children[0], 0);
        os << " in ";
        print_expr(os, e.children[1], 0);
      });
      break;
  }
}

}  // namespace detail

inline std::string pretty(const Expr& e) {
  std::ostringstream os;
  detail::print_expr(os, e, 0);
  return os.str();
}

inline std::string snippet(const Expr& e, size_t max_len = 40) {
  std::string s = pretty(e);
  if (s.size() > max_len) s = s.substr(0, max_len - 3) + "...";
  return s;
}

// Structural equality ignoring source spans.
inline bool same_shape(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.name != b.name || a.int_val != b.int_val ||
      a.bool_val != b.bool_val || a.str_val != b.str_val ||
      a.binder.tuple != b.binder.tuple || a.binder.names != b.binder.names ||
      a.children.size() != b.children.size())
    return false;
  for (size_t i = 0; i < a.children.size(); ++i)
    if (!same_shape(a.children[i], b.children[i])) return false;
  return true;
}

}  // namespace tyloc
