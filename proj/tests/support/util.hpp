#pragma once

#include <set>
#include <string>
#include <vector>

#include "tyloc/ast.hpp"
#include "tyloc/parse.hpp"

namespace testutil {

// The ill-typed running example: first/second/f over triples, with two
// calls to f passing a string where f's principal type demands an int.
inline const char* overview_program() {
  return
      "let first  (a, b, _) = a\n"
      "let second (a, b, _) = b\n"
      "let f x =\n"
      "  let first_x  = first x in\n"
      "  let second_x = int_of_string (second x) in\n"
      "  first_x + second_x\n"
      "f (\"1\", \"2\", f (\"3\", \"4\", 5))\n";
}

// Location of the first Var node named `name` on `line`, if any.
inline std::optional<tyloc::Location> find_var(const tyloc::Expr& p,
                                               const std::string& name,
                                               int line) {
  std::optional<tyloc::Location> out;
  tyloc::walk_locations(p, [&](const tyloc::Expr& e, const tyloc::Location& l) {
    if (out) return;
    if (e.kind == tyloc::ExprKind::Var && e.name == name &&
        e.span.line == line)
      out = l;
  });
  return out;
}

inline std::set<tyloc::Location> locs(std::initializer_list<std::vector<int>>
                                          paths) {
  std::set<tyloc::Location> out;
  for (const auto& p : paths) out.insert(tyloc::Location(p));
  return out;
}

}  // namespace testutil
