#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "support/naive_unify.hpp"
#include "tyloc/solver.hpp"

using namespace tyloc;

TEST_CASE("theory_check: satisfiable conjunction yields an mgu") {
  AtomTable atoms;
  std::vector<int> ids = {
      atoms.add(ty_var(0), ty_int()),
      atoms.add(ty_var(1), ty_fun(ty_var(0), ty_var(0))),
  };
  TheoryResult r = theory_check(atoms, ids);
  REQUIRE(r.sat);
  REQUIRE(type_key(r.subst.apply(ty_var(1))) ==
          type_key(ty_fun(ty_int(), ty_int())));
}

TEST_CASE("theory_check: constructor clash gives a two-atom core") {
  AtomTable atoms;
  std::vector<int> ids = {
      atoms.add(ty_var(0), ty_int()),
      atoms.add(ty_var(0), ty_bool()),
  };
  TheoryResult r = theory_check(atoms, ids);
  REQUIRE_FALSE(r.sat);
  REQUIRE(r.core.size() == 2);
}

TEST_CASE("theory_check: occurs check inside a cycle") {
  AtomTable atoms;
  std::vector<int> ids = {
      atoms.add(ty_var(0), ty_fun(ty_var(1), ty_int())),
      atoms.add(ty_var(1), ty_var(0)),
  };
  TheoryResult r = theory_check(atoms, ids);
  REQUIRE_FALSE(r.sat);
  REQUIRE_FALSE(r.core.empty());
}

TEST_CASE("property: cores are sound and irreducible") {
  std::mt19937 rng(51);
  for (int round = 0; round < 200; ++round) {
    AtomTable atoms;
    std::vector<int> ids;
    int n = 2 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i)
      ids.push_back(atoms.add(testgen::random_type(rng, 2, 4),
                              testgen::random_type(rng, 2, 4)));
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    TheoryResult r = theory_check(atoms, ids);
    if (r.sat) {
      for (int id : ids) {
        const auto& [l, rr] = atoms.at(id);
        REQUIRE(type_key(r.subst.apply(l)) == type_key(r.subst.apply(rr)));
      }
    } else {
      REQUIRE_FALSE(unify_all(atoms, r.core).has_value());
      for (size_t i = 0; i < r.core.size(); ++i) {
        std::vector<int> without = r.core;
        without.erase(without.begin() + static_cast<long>(i));
        REQUIRE(unify_all(atoms, without).has_value());
      }
    }
  }
}

TEST_CASE("smt_solve basics") {
  SmtProblem p;
  SmtOutcome r = smt_solve(p, {});
  REQUIRE(r.sat);

  // {!p | a=int, !p | a=bool} assuming p
  int pv = p.new_var(true);
  p.add_clause({mklit(pv, true), mklit(p.atom_var(ty_var(0), ty_int()))});
  p.add_clause({mklit(pv, true), mklit(p.atom_var(ty_var(0), ty_bool()))});
  SmtOutcome r2 = smt_solve(p, {mklit(pv)});
  REQUIRE_FALSE(r2.sat);
  REQUIRE(r2.core == std::vector<Lit>{mklit(pv)});
  SmtOutcome r3 = smt_solve(p, {});
  REQUIRE(r3.sat);
  REQUIRE(r3.model[static_cast<size_t>(pv)] == 0);
}

namespace {

struct RandomInstance {
  SmtProblem prob;
  int nprops = 0;
  std::vector<std::vector<Lit>> clause_copy;
};

RandomInstance random_smt_instance(std::mt19937& rng, int nprops, int natoms,
                                   int nclauses) {
  RandomInstance ri;
  ri.nprops = nprops;
  for (int i = 0; i < nprops; ++i) ri.prob.new_var(true);
  std::vector<int> avars;
  for (int i = 0; i < natoms; ++i)
    avars.push_back(ri.prob.atom_var(testgen::random_type(rng, 2, 3),
                                     testgen::random_type(rng, 2, 3)));
  for (int c = 0; c < nclauses; ++c) {
    std::vector<Lit> cl;
    int len = 2 + static_cast<int>(rng() % 2);
    for (int k = 0; k < len; ++k) {
      if (!avars.empty() && rng() % 3 == 0) {
        cl.push_back(
            mklit(avars[rng() % avars.size()]));  // atoms occur positively
      } else {
        cl.push_back(mklit(
            static_cast<int>(rng() % static_cast<unsigned>(nprops)),
            rng() % 2 == 0));
      }
    }
    ri.clause_copy.push_back(cl);
    ri.prob.add_clause(std::move(cl));
  }
  return ri;
}

// Exhaustive boolean enumeration plus unification of asserted atoms.
bool enum_satisfiable(const RandomInstance& ri) {
  int nv = ri.prob.nvars;
  REQUIRE(nv <= 20);
  for (long long m = 0; m < (1LL << nv); ++m) {
    auto val = [&](Lit l) {
      bool v = (m >> lit_var(l)) & 1;
      return lit_sign(l) ? !v : v;
    };
    bool all = true;
    for (const auto& c : ri.clause_copy) {
      bool sat = false;
      for (Lit l : c) sat = sat || val(l);
      if (!sat) {
        all = false;
        break;
      }
    }
    if (!all) continue;
    std::vector<int> asserted;
    for (size_t a = 0; a < ri.prob.atoms.size(); ++a)
      if ((m >> ri.prob.atom_vars[a]) & 1)
        asserted.push_back(static_cast<int>(a));
    if (unify_all(ri.prob.atoms, asserted).has_value()) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("property: smt_solve agrees with exhaustive enumeration") {
  std::mt19937 rng(61);
  int sat_count = 0, unsat_count = 0;
  for (int round = 0; round < 120; ++round) {
    RandomInstance ri =
        random_smt_instance(rng, 4 + rng() % 4, 2 + rng() % 3, 4 + rng() % 8);
    bool expect = enum_satisfiable(ri);
    SmtOutcome got = smt_solve(ri.prob, {});
    REQUIRE(got.sat == expect);
    if (expect) {
      ++sat_count;
      auto val = [&](Lit l) {
        bool v = got.model[static_cast<size_t>(lit_var(l))] != 0;
        return lit_sign(l) ? !v : v;
      };
      for (const auto& c : ri.clause_copy) {
        bool sat = false;
        for (Lit l : c) sat = sat || val(l);
        REQUIRE(sat);
      }
      std::vector<int> asserted;
      for (size_t a = 0; a < ri.prob.atoms.size(); ++a)
        if (got.model[static_cast<size_t>(ri.prob.atom_vars[a])])
          asserted.push_back(static_cast<int>(a));
      REQUIRE(unify_all(ri.prob.atoms, asserted).has_value());
    } else {
      ++unsat_count;
    }
  }
  REQUIRE(sat_count > 20);
  REQUIRE(unsat_count > 5);
}

TEST_CASE("wpmaxsmt trivial and two-soft cases") {
  {
    SmtProblem p;
    int a = p.new_var(true);
    std::vector<SoftItem> softs = {{a, 5}};
    SolveResult r = wpmaxsmt(p, softs);
    REQUIRE(r.penalty == 0);
    REQUIRE(r.achieved == 5);
  }
  {
    // soft {(a,2),(b,3)}, hard !a | !b -> keep b, penalty 2
    SmtProblem p;
    int a = p.new_var(true);
    int b = p.new_var(true);
    p.add_clause({mklit(a, true), mklit(b, true)});
    std::vector<SoftItem> softs = {{a, 2}, {b, 3}};
    SolveResult r = wpmaxsmt(p, softs);
    REQUIRE(r.penalty == 2);
    REQUIRE(r.model[static_cast<size_t>(b)] == 1);
    REQUIRE(r.model[static_cast<size_t>(a)] == 0);
  }
}

TEST_CASE("wpmaxsmt reports hard-unsatisfiable instances") {
  SmtProblem p;
  int a = p.new_var(true);
  p.add_clause({mklit(a)});
  p.add_clause({mklit(a, true)});
  std::vector<SoftItem> softs = {{p.new_var(true), 1}};
  REQUIRE_THROWS_AS(wpmaxsmt(p, softs), HardUnsat);
}

TEST_CASE("oracle_wpmaxsmt caps instance size") {
  SmtProblem p;
  std::vector<SoftItem> softs;
  for (int i = 0; i < 25; ++i) softs.push_back({p.new_var(true), 1});
  REQUIRE_THROWS_AS(oracle_wpmaxsmt(p, softs), std::invalid_argument);
}

TEST_CASE("property: wpmaxsmt matches the enumeration oracle") {
  std::mt19937 rng(71);
  int checked = 0;
  for (int round = 0; round < 220; ++round) {
    RandomInstance ri =
        random_smt_instance(rng, 5 + rng() % 6, 2 + rng() % 4, 4 + rng() % 8);
    std::vector<SoftItem> softs;
    int nsofts = 3 + static_cast<int>(rng() % 9);
    for (int i = 0; i < nsofts && i < ri.nprops; ++i)
      softs.push_back({i, 1 + static_cast<long long>(rng() % 9)});
    SmtProblem prob2 = ri.prob;  // the oracle runs on a copy
    if (!smt_solve(ri.prob, {}).sat) continue;  // hard part must be sat
    SolveResult got = wpmaxsmt(ri.prob, softs);
    SolveResult expect = oracle_wpmaxsmt(prob2, softs);
    REQUIRE(got.penalty == expect.penalty);
    REQUIRE(got.achieved == expect.achieved);
    ++checked;
  }
  REQUIRE(checked > 80);
}

TEST_CASE("wpmaxsmt picks the canonical optimum among ties") {
  // two equal-cost repairs; the scan order decides which one survives
  for (bool flip : {false, true}) {
    SmtProblem p;
    int a = p.new_var(true);
    int b = p.new_var(true);
    p.add_clause({mklit(a, true), mklit(b, true)});
    std::vector<SoftItem> softs;
    if (flip)
      softs = {{b, 1}, {a, 1}};
    else
      softs = {{a, 1}, {b, 1}};
    SolveResult r = wpmaxsmt(p, softs);
    REQUIRE(r.penalty == 1);
    REQUIRE(r.model[static_cast<size_t>(flip ? b : a)] == 1);
    REQUIRE(r.model[static_cast<size_t>(flip ? a : b)] == 0);
  }
}

TEST_CASE("property: production unifier agrees with the rewriting unifier") {
  std::mt19937 rng(81);
  for (int round = 0; round < 500; ++round) {
    TypeRef a = testgen::random_type(rng, 3, 5);
    TypeRef b = testgen::random_type(rng, 3, 5);
    auto fast = unify(a, b);
    auto naive = testgen::NaiveUnifier::solve({{a, b}});
    REQUIRE(fast.has_value() == naive.has_value());
    if (fast) {
      for (int v = 0; v < 5; ++v)
        for (int w = v + 1; w < 5; ++w) {
          bool eq_fast = type_key(fast->apply(ty_var(v))) ==
                         type_key(fast->apply(ty_var(w)));
          bool eq_naive =
              type_key(testgen::NaiveUnifier::apply(*naive, ty_var(v))) ==
              type_key(testgen::NaiveUnifier::apply(*naive, ty_var(w)));
          REQUIRE(eq_fast == eq_naive);
        }
      REQUIRE(type_key(fast->apply(a)) == type_key(fast->apply(b)));
      REQUIRE(type_key(testgen::NaiveUnifier::apply(*naive, a)) ==
              type_key(testgen::NaiveUnifier::apply(*naive, b)));
    }
  }
}
