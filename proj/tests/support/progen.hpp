#pragma once

#include <random>
#include <string>
#include <vector>

#include "tyloc/ast.hpp"
#include "tyloc/infer.hpp"

namespace testgen {

// Random closed programs over the full grammar. Deterministic per rng state;
// sizes land in roughly 4..30 nodes.
struct ProgGen {
  std::mt19937& rng;
  int next_name = 0;

  int pick(int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); }

  std::string fresh() { return "x" + std::to_string(next_name++); }

  tyloc::Expr leaf(const std::vector<std::string>& scope) {
    int c = pick(10);
    if (c < 4 && !scope.empty())
      return tyloc::make_var(scope[static_cast<size_t>(pick(
          static_cast<int>(scope.size())))]);
    if (c < 6) return tyloc::make_int(pick(10));
    if (c < 7) return tyloc::make_bool(pick(2) == 0);
    if (c < 8) return tyloc::make_str(std::string(1, static_cast<char>('a' + pick(3))));
    if (c < 9 && !scope.empty())
      return tyloc::make_var(scope[static_cast<size_t>(pick(
          static_cast<int>(scope.size())))]);
    return tyloc::make_hole();
  }

  tyloc::Expr gen(int budget, std::vector<std::string>& scope) {
    if (budget <= 1) return leaf(scope);
    switch (pick(12)) {
      case 0: case 1: {  // lambda
        tyloc::Binder b;
        if (budget >= 4 && pick(4) == 0) {
          b.tuple = true;
          int arity = 2 + pick(2);
          for (int i = 0; i < arity; ++i)
            b.names.push_back(pick(5) == 0 ? "_" : fresh());
        } else {
          b.names.push_back(pick(6) == 0 ? "_" : fresh());
        }
        size_t pushed = 0;
        for (const auto& n : b.names)
          if (n != "_") {
            scope.push_back(n);
            ++pushed;
          }
        tyloc::Expr body = gen(budget - 1, scope);
        scope.resize(scope.size() - pushed);
        return tyloc::make_lambda(b, std::move(body));
      }
      case 2: case 3: case 4: {  // application
        int lb = 1 + pick(std::max(1, budget - 2));
        tyloc::Expr f = gen(lb, scope);
        tyloc::Expr a = gen(budget - 1 - lb, scope);
        return tyloc::make_app(std::move(f), std::move(a));
      }
      case 5: {  // a + b
        int lb = 1 + pick(std::max(1, budget - 4));
        tyloc::Expr a = gen(lb, scope);
        tyloc::Expr b = gen(std::max(1, budget - 3 - lb), scope);
        return tyloc::make_app(
            tyloc::make_app(tyloc::make_var("+"), std::move(a)), std::move(b));
      }
      case 6: {  // int_of_string e
        tyloc::Expr a = gen(budget - 2, scope);
        return tyloc::make_app(tyloc::make_var("int_of_string"), std::move(a));
      }
      case 7: {  // conditional
        int b1 = 1 + pick(std::max(1, budget / 3));
        int b2 = 1 + pick(std::max(1, budget / 3));
        tyloc::Expr c = gen(b1, scope);
        tyloc::Expr t = gen(b2, scope);
        tyloc::Expr e = gen(std::max(1, budget - 1 - b1 - b2), scope);
        return tyloc::make_cond(std::move(c), std::move(t), std::move(e));
      }
      case 8: case 9: {  // let
        std::string n = fresh();
        int db = 1 + pick(std::max(1, budget / 2));
        tyloc::Expr def = gen(db, scope);
        scope.push_back(n);
        tyloc::Expr body = gen(std::max(1, budget - 1 - db), scope);
        scope.pop_back();
        return tyloc::make_let(n, std::move(def), std::move(body));
      }
      case 10: {  // tuple
        int arity = 2 + pick(2);
        std::vector<tyloc::Expr> parts;
        int each = std::max(1, (budget - 1) / arity);
        for (int i = 0; i < arity; ++i) parts.push_back(gen(each, scope));
        return tyloc::make_tuple(std::move(parts));
      }
      default:
        return leaf(scope);
    }
  }
};

inline tyloc::Expr random_program(std::mt19937& rng, int max_budget = 24) {
  ProgGen g{rng};
  std::vector<std::string> scope;
  int budget = 4 + g.pick(std::max(1, max_budget - 4));
  return g.gen(budget, scope);
}

inline tyloc::Expr random_illtyped_program(std::mt19937& rng,
                                           size_t max_nodes = 30) {
  for (int tries = 0; tries < 20000; ++tries) {
    tyloc::Expr p = random_program(rng);
    if (tyloc::node_count(p) <= max_nodes && !tyloc::well_typed(p)) return p;
  }
  throw std::runtime_error("could not generate an ill-typed program");
}

inline tyloc::Expr random_welltyped_program(std::mt19937& rng,
                                            size_t max_nodes = 30) {
  for (int tries = 0; tries < 20000; ++tries) {
    tyloc::Expr p = random_program(rng);
    if (tyloc::node_count(p) <= max_nodes && tyloc::well_typed(p)) return p;
  }
  throw std::runtime_error("could not generate a well-typed program");
}

}  // namespace testgen
