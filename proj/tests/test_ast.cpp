#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "support/progen.hpp"
#include "support/util.hpp"
#include "tyloc/ast.hpp"
#include "tyloc/parse.hpp"
#include "tyloc/pretty.hpp"

using namespace tyloc;

TEST_CASE("parse of simple forms") {
  Expr id = parse("fun x -> x");
  REQUIRE(id.kind == ExprKind::Lambda);
  REQUIRE(id.children[0].kind == ExprKind::Var);
  REQUIRE(id.children[0].name == "x");

  Expr h = parse("?");
  REQUIRE(h.kind == ExprKind::Hole);

  Expr t = parse("(1, true, \"s\")");
  REQUIRE(t.kind == ExprKind::Tuple);
  REQUIRE(t.children.size() == 3);

  Expr plus = parse("1 + 2 + 3");
  REQUIRE(plus.kind == ExprKind::App);
  // left associative: ((1 + 2) + 3)
  REQUIRE(plus.children[0].children[0].name == "+");
  REQUIRE(plus.children[0].children[1].kind == ExprKind::App);

  Expr letin = parse("let x = 1 in x");
  REQUIRE(letin.kind == ExprKind::Let);
  REQUIRE(letin.children[1].name == "x");
}

TEST_CASE("parse errors carry positions") {
  REQUIRE_THROWS_AS(parse("fun ->"), ParseError);
  REQUIRE_THROWS_AS(parse("(1, 2, 3, 4)"), ParseError);
  REQUIRE_THROWS_AS(parse("let x = 1"), ParseError);
  REQUIRE_THROWS_AS(parse("y"), UnboundVariable);
  try {
    parse("1 +\n  zz");
  } catch (const UnboundVariable& e) {
    REQUIRE(e.line == 2);
    REQUIRE(e.var == "zz");
  }
}

TEST_CASE("overview program parses with distinct definition locations") {
  Expr p = parse(testutil::overview_program());
  REQUIRE(p.kind == ExprKind::Let);
  REQUIRE(p.name == "first");
  REQUIRE(p.children[1].name == "second");
  REQUIRE(p.children[1].children[1].name == "f");
  // definition roots are distinct prefixes
  Location first_def({0}), second_def({1, 0}), f_def({1, 1, 0});
  REQUIRE(subexpr(p, first_def).kind == ExprKind::Lambda);
  REQUIRE(subexpr(p, second_def).kind == ExprKind::Lambda);
  REQUIRE(subexpr(p, f_def).kind == ExprKind::Lambda);
  REQUIRE(node_count(p) == 34);
}

TEST_CASE("locations enumerates every node") {
  REQUIRE(locations(parse("?")).size() == 1);
  Expr app = parse("fun x -> fun y -> x y").children[0].children[0];
  REQUIRE(app.kind == ExprKind::App);
  auto ls = locations(app);
  REQUIRE(ls.size() == 3);
  REQUIRE(ls[0] == Location{});
  REQUIRE(ls[1] == Location({0}));
  REQUIRE(ls[2] == Location({1}));

  Expr p = parse(testutil::overview_program());
  auto first_use = testutil::find_var(p, "first", 4);
  REQUIRE(first_use.has_value());
  auto all = locations(p);
  REQUIRE(std::find(all.begin(), all.end(), *first_use) != all.end());
}

TEST_CASE("subexpr walks paths") {
  Expr p = parse("fun f -> fun x -> f x");
  REQUIRE(&subexpr(p, Location{}) == &p);
  const Expr& x = subexpr(p, Location({0, 0, 1}));
  REQUIRE(x.kind == ExprKind::Var);
  REQUIRE(x.name == "x");
  REQUIRE_THROWS_AS(subexpr(p, Location({5})), InvalidLocation);

  Expr ov = parse(testutil::overview_program());
  auto ios_use = testutil::find_var(ov, "int_of_string", 5);
  REQUIRE(ios_use.has_value());
  Location app_loc = *ios_use;
  app_loc.path.pop_back();  // parent application node
  REQUIRE(subexpr(ov, app_loc).kind == ExprKind::App);
}

TEST_CASE("mask replaces subtrees by holes") {
  Expr p = parse(testutil::overview_program());
  REQUIRE(mask(p, {Location{}}).kind == ExprKind::Hole);
  REQUIRE(same_shape(mask(p, {}), p));
  REQUIRE_THROWS_AS(mask(p, {Location({9, 9})}), InvalidLocation);

  auto first_use = testutil::find_var(p, "first", 4);
  Expr masked = mask(p, {*first_use});
  REQUIRE(subexpr(masked, *first_use).kind == ExprKind::Hole);
  REQUIRE(node_count(masked) == node_count(p));
}

TEST_CASE("ast_size_cost weights by subtree size") {
  Expr p = parse(testutil::overview_program());
  CostFunction R = ast_size_cost(p);
  auto first_use = testutil::find_var(p, "first", 4);
  REQUIRE(R.at(*first_use) == 1);
  Location app4 = *first_use;
  app4.path.pop_back();
  REQUIRE(R.at(app4) == 3);  // first, x, and the application
  REQUIRE(R.at(Location{}) == static_cast<int>(node_count(p)));
}

TEST_CASE("holes carry no weight, root stays soft") {
  Expr p = parse("let x = ? in x + 1");
  CostFunction R = ast_size_cost(p);
  REQUIRE_FALSE(R.has(Location({0})));  // the hole definition
  REQUIRE(R.has(Location{}));
  Expr only_hole = parse("?");
  REQUIRE(ast_size_cost(only_hole).has(Location{}));
}

TEST_CASE("hard builtin usages drop out of the cost domain") {
  Expr p = parse("1 + int_of_string \"2\"");
  AstCostOptions opt;
  opt.hard_builtin_usages = true;
  CostFunction R = ast_size_cost(p, opt);
  auto plus = testutil::find_var(p, "+", 1);
  auto ios = testutil::find_var(p, "int_of_string", 1);
  REQUIRE_FALSE(R.has(*plus));
  REQUIRE_FALSE(R.has(*ios));
  // shadowed builtin is a normal variable again
  Expr q = parse("let int_of_string = 1 in int_of_string");
  CostFunction R2 = ast_size_cost(q, opt);
  auto use = testutil::find_var(q, "int_of_string", 1);
  REQUIRE(R2.has(*use));
}

TEST_CASE("pretty print round trip is stable") {
  auto check = [](const std::string& text) {
    Expr p1 = parse(text);
    std::string printed = pretty(p1);
    Expr p2 = parse(printed);
    REQUIRE(same_shape(p1, p2));
    REQUIRE(pretty(p2) == printed);
  };
  check(testutil::overview_program());
  check("fun (a, b, _) -> a");
  check("if true then (1, 2) else (3, 4)");
  check("let g = fun x -> x + 1 in g (g 2)");
  check("\"a\\\"b\\n\" ");
  check("(+) 1");
}

TEST_CASE("property: random programs round trip and mask stays inside") {
  std::mt19937 rng(7);
  for (int i = 0; i < 120; ++i) {
    Expr p = testgen::random_program(rng);
    std::string printed = pretty(p);
    Expr q = parse(printed);
    REQUIRE(same_shape(p, q));
    REQUIRE(pretty(q) == printed);

    auto all = locations(q);
    std::set<Location> L;
    for (const auto& l : all)
      if (rng() % 4 == 0) L.insert(l);
    Expr m = mask(q, L);
    // Loc(mask(p, L)) is a subset of Loc(p) as path sets.
    auto ml = locations(m);
    std::set<Location> orig(all.begin(), all.end());
    for (const auto& l : ml) REQUIRE(orig.count(l) == 1);
    // Masking the antichain gives the same result.
    REQUIRE(same_shape(m, mask(q, prefix_antichain(L))));
  }
}

TEST_CASE("property: cost of every location equals its subtree size") {
  std::mt19937 rng(11);
  for (int i = 0; i < 60; ++i) {
    Expr p = testgen::random_program(rng);
    CostFunction R = ast_size_cost(p);
    walk_locations(p, [&](const Expr& e, const Location& l) {
      if (R.has(l))
        REQUIRE(R.at(l) == static_cast<int>(node_count(e)));
      else
        REQUIRE((e.kind == ExprKind::Hole && !l.is_root()));
    });
  }
}
