#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tyloc/constraints.hpp"
#include "tyloc/types.hpp"

namespace tyloc {

// Literal encoding: variable v -> positive 2v, negated 2v+1.
using Lit = int;
inline Lit mklit(int var, bool neg = false) { return 2 * var + (neg ? 1 : 0); }
inline int lit_var(Lit l) { return l >> 1; }
inline bool lit_sign(Lit l) { return (l & 1) != 0; }  // true = negated
inline Lit lit_not(Lit l) { return l ^ 1; }

struct SolverStats {
  long long sat_calls = 0;
  long long conflicts = 0;
  long long decisions = 0;
  long long propagations = 0;
  long long theory_checks = 0;
  long long theory_conflicts = 0;
  long long maxres_rounds = 0;

  void add(const SolverStats& o) {
    sat_calls += o.sat_calls;
    conflicts += o.conflicts;
    decisions += o.decisions;
    propagations += o.propagations;
    theory_checks += o.theory_checks;
    theory_conflicts += o.theory_conflicts;
    maxres_rounds += o.maxres_rounds;
  }
};

struct HardUnsat : std::runtime_error {
  HardUnsat() : std::runtime_error("hard clauses are unsatisfiable") {}
};

// ---------------------------------------------------------------------------
// CDCL propositional core with assumptions and final-conflict analysis.
// Deterministic: static lowest-index branching, saved phases, no restarts.
// ---------------------------------------------------------------------------
class SatSolver {
 public:
  int new_var(bool phase = true) {
    value_.push_back(-1);
    level_.push_back(0);
    reason_.push_back(-1);
    phase_.push_back(phase ? 1 : 0);
    seen_.push_back(0);
    watches_.emplace_back();
    watches_.emplace_back();
    return nvars_++;
  }

  // Only between solves (at decision level 0).
  void add_clause(std::vector<Lit> c) {
    if (!ok_) return;
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (size_t i = 0; i + 1 < c.size(); ++i)
      if (c[i + 1] == (c[i] ^ 1)) return;  // tautology
    std::vector<Lit> out;
    for (Lit l : c) {
      int8_t v = lit_value(l);
      if (v == 1 && level_[lit_var(l)] == 0) return;  // satisfied at L0
      if (v == 0 && level_[lit_var(l)] == 0) continue;
      out.push_back(l);
    }
    if (out.empty()) {
      ok_ = false;
      return;
    }
    if (out.size() == 1) {
      int8_t v = lit_value(out[0]);
      if (v == 0) {
        ok_ = false;
        return;
      }
      if (v == -1) enqueue(out[0], -1);
      pending_propagate_ = true;
      return;
    }
    attach(std::move(out));
  }

  enum class Result { Sat, Unsat };

  Result solve(const std::vector<Lit>& assumptions, SolverStats& stats) {
    core_.clear();
    if (!ok_) return Result::Unsat;
    cancel_until(0);
    stats.sat_calls++;
    if (propagate() >= 0) {
      ok_ = false;
      return Result::Unsat;
    }
    for (;;) {
      int confl = propagate();
      if (confl >= 0) {
        stats.conflicts++;
        if (decision_level() == 0) {
          ok_ = false;
          return Result::Unsat;
        }
        auto [learnt, bt] = analyze(confl);
        cancel_until(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], -1);
        } else {
          int ci = attach(std::move(learnt));
          enqueue(clauses_[ci][0], ci);
        }
        continue;
      }
      if (decision_level() < static_cast<int>(assumptions.size())) {
        Lit a = assumptions[static_cast<size_t>(decision_level())];
        int8_t v = lit_value(a);
        if (v == 1) {
          new_level();  // placeholder level keeps index = level
          continue;
        }
        if (v == 0) {
          analyze_final(a, assumptions);
          return Result::Unsat;
        }
        stats.decisions++;
        new_level();
        enqueue(a, -1);
        continue;
      }
      int x = next_unassigned();
      if (x < 0) return Result::Sat;
      stats.decisions++;
      new_level();
      enqueue(mklit(x, phase_[x] == 0), -1);
    }
  }

  int8_t model_value(int var) const { return value_[var]; }
  const std::vector<Lit>& core() const { return core_; }
  bool ok() const { return ok_; }
  int num_vars() const { return nvars_; }

 private:
  int nvars_ = 0;
  bool ok_ = true;
  bool pending_propagate_ = false;
  std::vector<std::vector<Lit>> clauses_;
  std::vector<std::vector<int>> watches_;  // per literal
  std::vector<int8_t> value_;              // -1 unassigned / 0 false / 1 true
  std::vector<int> level_;
  std::vector<int> reason_;  // clause index or -1
  std::vector<uint8_t> phase_;
  std::vector<uint8_t> seen_;
  std::vector<Lit> trail_;
  std::vector<size_t> trail_lim_;
  size_t qhead_ = 0;
  std::vector<Lit> core_;

  int8_t lit_value(Lit l) const {
    int8_t v = value_[lit_var(l)];
    if (v < 0) return -1;
    return lit_sign(l) ? static_cast<int8_t>(1 - v) : v;
  }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }
  void new_level() { trail_lim_.push_back(trail_.size()); }

  void enqueue(Lit l, int reason) {
    int v = lit_var(l);
    value_[v] = lit_sign(l) ? 0 : 1;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  int attach(std::vector<Lit> c) {
    int ci = static_cast<int>(clauses_.size());
    watches_[c[0]].push_back(ci);
    watches_[c[1]].push_back(ci);
    clauses_.push_back(std::move(c));
    return ci;
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    size_t bound = trail_lim_[static_cast<size_t>(lvl)];
    for (size_t i = trail_.size(); i-- > bound;) {
      int v = lit_var(trail_[i]);
      phase_[v] = value_[v];
      value_[v] = -1;
      reason_[v] = -1;
    }
    trail_.resize(bound);
    trail_lim_.resize(static_cast<size_t>(lvl));
    qhead_ = trail_.size();
  }

  int next_unassigned() const {
    for (int v = 0; v < nvars_; ++v)
      if (value_[v] < 0) return v;
    return -1;
  }

  int propagate() {
    while (qhead_ < trail_.size()) {
      Lit p = trail_[qhead_++];
      Lit fp = lit_not(p);
      auto& ws = watches_[fp];
      size_t j = 0;
      for (size_t iw = 0; iw < ws.size(); ++iw) {
        int ci = ws[iw];
        auto& c = clauses_[ci];
        if (c[0] == fp) std::swap(c[0], c[1]);
        if (lit_value(c[0]) == 1) {
          ws[j++] = ci;
          continue;
        }
        bool moved = false;
        for (size_t k = 2; k < c.size(); ++k) {
          if (lit_value(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[c[1]].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = ci;
        if (lit_value(c[0]) == 0) {
          for (size_t k = iw + 1; k < ws.size(); ++k) ws[j++] = ws[k];
          ws.resize(j);
          qhead_ = trail_.size();
          return ci;
        }
        enqueue(c[0], ci);
      }
      ws.resize(j);
    }
    return -1;
  }

  std::pair<std::vector<Lit>, int> analyze(int confl) {
    std::vector<Lit> learnt;
    learnt.push_back(-1);  // slot for the asserting literal
    int idx = static_cast<int>(trail_.size()) - 1;
    Lit p = -1;
    int counter = 0;
    int cur = decision_level();
    int ci = confl;
    do {
      const auto& c = clauses_[ci];
      for (Lit q : c) {
        if (q == p) continue;
        int v = lit_var(q);
        if (!seen_[v] && level_[v] > 0) {
          seen_[v] = 1;
          if (level_[v] == cur)
            counter++;
          else
            learnt.push_back(q);
        }
      }
      while (!seen_[lit_var(trail_[static_cast<size_t>(idx)])]) idx--;
      p = trail_[static_cast<size_t>(idx)];
      ci = reason_[lit_var(p)];
      seen_[lit_var(p)] = 0;
      counter--;
      idx--;
    } while (counter > 0);
    learnt[0] = lit_not(p);
    int bt = 0;
    size_t max_i = 1;
    for (size_t i = 1; i < learnt.size(); ++i) {
      seen_[lit_var(learnt[i])] = 0;
      if (level_[lit_var(learnt[i])] > bt) {
        bt = level_[lit_var(learnt[i])];
        max_i = i;
      }
    }
    if (learnt.size() > 1) std::swap(learnt[1], learnt[max_i]);
    return {std::move(learnt), bt};
  }

  void analyze_final(Lit failed, const std::vector<Lit>& assumptions) {
    core_.clear();
    core_.push_back(failed);
    if (decision_level() == 0) return;
    seen_[lit_var(failed)] = 1;
    for (size_t i = trail_.size(); i-- > trail_lim_[0];) {
      int v = lit_var(trail_[i]);
      if (!seen_[v]) continue;
      if (reason_[v] < 0) {
        core_.push_back(trail_[i]);
      } else {
        for (Lit q : clauses_[static_cast<size_t>(reason_[v])])
          if (lit_var(q) != v && level_[lit_var(q)] > 0) seen_[lit_var(q)] = 1;
      }
      seen_[v] = 0;
    }
    seen_[lit_var(failed)] = 0;
    // keep the assumption order for determinism
    std::vector<Lit> ordered;
    for (Lit a : assumptions)
      if (std::find(core_.begin(), core_.end(), a) != core_.end())
        ordered.push_back(a);
    core_ = std::move(ordered);
  }
};

// ---------------------------------------------------------------------------
// Theory of inductive datatypes: a conjunction of type equalities is checked
// by unification; failures yield an irreducible core.
// ---------------------------------------------------------------------------
class AtomTable {
 public:
  int add(TypeRef lhs, TypeRef rhs) {
    std::string ka = type_key(lhs), kb = type_key(rhs);
    if (kb < ka) {
      std::swap(lhs, rhs);
      std::swap(ka, kb);
    }
    std::string key = ka + "=" + kb;
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(atoms_.size());
    atoms_.emplace_back(std::move(lhs), std::move(rhs));
    index_[key] = id;
    return id;
  }
  size_t size() const { return atoms_.size(); }
  const std::pair<TypeRef, TypeRef>& at(int i) const {
    return atoms_[static_cast<size_t>(i)];
  }

 private:
  std::vector<std::pair<TypeRef, TypeRef>> atoms_;
  std::map<std::string, int> index_;
};

struct TheoryResult {
  bool sat = false;
  Substitution subst;       // most general unifier when sat
  std::vector<int> core;    // irreducible unsatisfiable subset otherwise
};

inline std::optional<Substitution> unify_all(const AtomTable& atoms,
                                             const std::vector<int>& ids) {
  Substitution s;
  for (int i : ids) {
    const auto& [l, r] = atoms.at(i);
    if (!detail::unify_into(l, r, s)) return std::nullopt;
  }
  return s;
}

inline TheoryResult theory_check(const AtomTable& atoms,
                                 const std::vector<int>& asserted) {
  TheoryResult out;
  Substitution s;
  for (size_t k = 0; k < asserted.size(); ++k) {
    const auto& [l, r] = atoms.at(asserted[k]);
    if (detail::unify_into(l, r, s)) continue;
    // Conflict within the prefix; shrink to an irreducible core.
    std::vector<int> cand(asserted.begin(),
                          asserted.begin() + static_cast<long>(k) + 1);
    for (size_t i = 0; i < cand.size();) {
      std::vector<int> without = cand;
      without.erase(without.begin() + static_cast<long>(i));
      if (!unify_all(atoms, without))
        cand = std::move(without);
      else
        ++i;
    }
    out.sat = false;
    out.core = std::move(cand);
    return out;
  }
  out.sat = true;
  out.subst = std::move(s);
  return out;
}

// ---------------------------------------------------------------------------
// Lazy SMT: the boolean core proposes full assignments, the theory validates
// the asserted atoms and contributes blocking clauses from failure cores.
// ---------------------------------------------------------------------------
struct SmtProblem {
  int nvars = 0;
  std::vector<std::vector<Lit>> clauses;
  std::vector<uint8_t> phase;
  AtomTable atoms;
  std::vector<int> atom_vars;  // atom id -> boolean variable
  std::vector<std::vector<Lit>> theory_lemmas;  // valid, shared across runs
  SolverStats stats;

  int new_var(bool ph = true) {
    phase.push_back(ph ? 1 : 0);
    return nvars++;
  }
  int atom_var(TypeRef l, TypeRef r) {
    int id = atoms.add(std::move(l), std::move(r));
    while (static_cast<size_t>(id) >= atom_vars.size())
      atom_vars.push_back(new_var(false));  // unforced atoms stay unasserted
    return atom_vars[static_cast<size_t>(id)];
  }
  void add_clause(std::vector<Lit> c) { clauses.push_back(std::move(c)); }
};

struct SmtOutcome {
  bool sat = false;
  std::vector<uint8_t> model;  // var -> 0/1
  Substitution subst;
  std::vector<Lit> core;  // subset of the assumptions when unsat
};

namespace detail {

struct SatRun {
  SatSolver sat;
  explicit SatRun(const SmtProblem& p) {
    for (int v = 0; v < p.nvars; ++v) sat.new_var(p.phase[static_cast<size_t>(v)] != 0);
    for (const auto& c : p.clauses) sat.add_clause(c);
    for (const auto& c : p.theory_lemmas) sat.add_clause(c);
  }
};

}  // namespace detail

inline SmtOutcome smt_solve(SmtProblem& prob, const std::vector<Lit>& assumptions) {
  SmtOutcome out;
  for (;;) {
    detail::SatRun run(prob);
    auto r = run.sat.solve(assumptions, prob.stats);
    if (r == SatSolver::Result::Unsat) {
      out.sat = false;
      out.core = run.sat.core();
      return out;
    }
    std::vector<int> asserted;
    for (size_t i = 0; i < prob.atom_vars.size(); ++i)
      if (run.sat.model_value(prob.atom_vars[i]) == 1)
        asserted.push_back(static_cast<int>(i));
    prob.stats.theory_checks++;
    TheoryResult th = theory_check(prob.atoms, asserted);
    if (th.sat) {
      out.sat = true;
      out.model.resize(static_cast<size_t>(prob.nvars));
      for (int v = 0; v < prob.nvars; ++v)
        out.model[static_cast<size_t>(v)] =
            run.sat.model_value(v) == 1 ? 1 : 0;
      out.subst = std::move(th.subst);
      return out;
    }
    prob.stats.theory_conflicts++;
    std::vector<Lit> block;
    for (int a : th.core)
      block.push_back(mklit(prob.atom_vars[static_cast<size_t>(a)], true));
    prob.theory_lemmas.push_back(std::move(block));
  }
}

// ---------------------------------------------------------------------------
// Weighted partial MaxSMT.
// ---------------------------------------------------------------------------
struct SoftItem {
  int var = -1;
  long long weight = 0;
};

struct SolveResult {
  std::vector<uint8_t> model;
  Substitution subst;
  long long achieved = 0;
  long long penalty = 0;
};

struct WpmaxOptions {
  // Canonical tie-break: scan softs in the given order preferring true;
  // blame settles on the latest positions that still reach the optimum.
  bool canonicalize = true;
  int bb_threshold = 8;  // branch-and-bound for tiny instances
};

namespace detail {

// Core-guided weighted MaxRes over assumption literals.
inline SolveResult maxres(SmtProblem& prob, const std::vector<SoftItem>& softs,
                          const std::vector<Lit>& fixed) {
  long long total = 0;
  std::vector<std::pair<Lit, long long>> asms;
  for (const auto& s : softs) {
    asms.emplace_back(mklit(s.var), s.weight);
    total += s.weight;
  }
  long long penalty = 0;
  for (;;) {
    std::vector<Lit> assume = fixed;
    for (const auto& [l, w] : asms) assume.push_back(l);
    SmtOutcome r = smt_solve(prob, assume);
    if (r.sat) {
      SolveResult out;
      out.model = std::move(r.model);
      out.subst = std::move(r.subst);
      out.penalty = penalty;
      out.achieved = total - penalty;
      return out;
    }
    prob.stats.maxres_rounds++;
    std::vector<Lit> core;
    for (Lit l : r.core)
      if (std::find(fixed.begin(), fixed.end(), l) == fixed.end())
        core.push_back(l);
    if (core.empty()) throw HardUnsat();
    // Deletion-based shrink to a smaller core; each probe may itself return
    // a core, which supersedes the candidate.
    if (core.size() > 1 && core.size() <= 16) {
      for (size_t i = 0; i < core.size() && core.size() > 1;) {
        std::vector<Lit> probe = fixed;
        for (size_t k = 0; k < core.size(); ++k)
          if (k != i) probe.push_back(core[k]);
        SmtOutcome pr = smt_solve(prob, probe);
        if (!pr.sat) {
          std::vector<Lit> next;
          for (Lit l : pr.core)
            if (std::find(fixed.begin(), fixed.end(), l) == fixed.end())
              next.push_back(l);
          if (next.empty()) throw HardUnsat();
          core = std::move(next);
          i = 0;
        } else {
          ++i;
        }
      }
    }
    // Order core by assumption position for deterministic relaxation.
    std::vector<size_t> pos;
    for (Lit l : core)
      for (size_t i = 0; i < asms.size(); ++i)
        if (asms[i].first == l) {
          pos.push_back(i);
          break;
        }
    std::sort(pos.begin(), pos.end());
    std::vector<std::pair<Lit, long long>> core_items;
    for (size_t i : pos) core_items.push_back(asms[i]);
    long long wmin = core_items[0].second;
    for (const auto& [l, w] : core_items) wmin = std::min(wmin, w);
    penalty += wmin;
    // Remove core literals; re-add the residual weights.
    std::vector<std::pair<Lit, long long>> next_asms;
    for (size_t i = 0; i < asms.size(); ++i) {
      if (std::find(pos.begin(), pos.end(), i) != pos.end()) {
        if (asms[i].second > wmin)
          next_asms.emplace_back(asms[i].first, asms[i].second - wmin);
      } else {
        next_asms.push_back(asms[i]);
      }
    }
    // MaxRes relaxation: new soft s_i => (b_i \/ (b_0 /\ ... /\ b_{i-1}))
    // at weight wmin; exactly one fewer of them fails than of the core.
    std::vector<Lit> negcore;
    for (const auto& [l, w] : core_items) negcore.push_back(lit_not(l));
    prob.add_clause(std::move(negcore));  // entailed; aids propagation
    size_t k = core_items.size();
    if (k >= 2) {
      Lit conj = core_items[0].first;  // b_0 /\ ... /\ b_{i-1} so far
      for (size_t i = 1; i < k; ++i) {
        if (i >= 2) {
          int d = prob.new_var(true);
          Lit dl = mklit(d);
          prob.add_clause({lit_not(dl), conj});
          prob.add_clause({lit_not(dl), core_items[i - 1].first});
          conj = dl;
        }
        int s = prob.new_var(true);
        prob.add_clause({mklit(s, true), core_items[i].first, conj});
        next_asms.emplace_back(mklit(s), wmin);
      }
    }
    asms = std::move(next_asms);
  }
}

inline long long soft_weight_total(const std::vector<SoftItem>& softs) {
  long long t = 0;
  for (const auto& s : softs) t += s.weight;
  return t;
}

// Exhaustive assignment search, preferring true in scan order so that the
// first optimum found is the canonical one.
inline SolveResult branch_and_bound(SmtProblem& prob,
                                    const std::vector<SoftItem>& softs,
                                    const std::vector<Lit>& fixed) {
  SolveResult best;
  long long best_penalty = -1;
  std::vector<Lit> chosen = fixed;
  auto rec = [&](auto&& self, size_t i, long long pen) -> void {
    if (best_penalty >= 0 && pen >= best_penalty) return;
    if (i == softs.size()) {
      SmtOutcome r = smt_solve(prob, chosen);
      if (r.sat && (best_penalty < 0 || pen < best_penalty)) {
        best_penalty = pen;
        best.model = std::move(r.model);
        best.subst = std::move(r.subst);
      }
      return;
    }
    chosen.push_back(mklit(softs[i].var));
    self(self, i + 1, pen);
    chosen.back() = mklit(softs[i].var, true);
    self(self, i + 1, pen + softs[i].weight);
    chosen.pop_back();
  };
  rec(rec, 0, 0);
  if (best_penalty < 0) throw HardUnsat();
  best.penalty = best_penalty;
  best.achieved = soft_weight_total(softs) - best_penalty;
  return best;
}

}  // namespace detail

// Maximizes the summed weight of true soft variables subject to the hard
// clauses modulo the theory. Deterministic; the returned model is the
// prefer-true canonical optimum in soft order when canonicalize is set.
inline SolveResult wpmaxsmt(SmtProblem& prob,
                            const std::vector<SoftItem>& softs,
                            const WpmaxOptions& opts = {}) {
  if (softs.size() <= static_cast<size_t>(opts.bb_threshold))
    return detail::branch_and_bound(prob, softs, {});

  SolveResult first = detail::maxres(prob, softs, {});
  if (!opts.canonicalize) return first;

  long long best = first.penalty;
  SolveResult incumbent = std::move(first);
  std::vector<Lit> fixed;
  long long fixed_false_weight = 0;
  for (size_t i = 0; i < softs.size(); ++i) {
    const SoftItem& s = softs[i];
    if (incumbent.model[static_cast<size_t>(s.var)]) {
      fixed.push_back(mklit(s.var));
      continue;
    }
    // The incumbent falsifies this soft; check whether some optimum keeps it
    // true given the prefix already fixed.
    std::vector<Lit> probe_fixed = fixed;
    probe_fixed.push_back(mklit(s.var));
    std::vector<SoftItem> rest(softs.begin() + static_cast<long>(i) + 1,
                               softs.end());
    bool flipped = false;
    try {
      SolveResult r = detail::maxres(prob, rest, probe_fixed);
      if (fixed_false_weight + r.penalty == best) {
        incumbent = std::move(r);
        fixed = std::move(probe_fixed);
        flipped = true;
      }
    } catch (const HardUnsat&) {
      flipped = false;
    }
    if (!flipped) {
      fixed.push_back(mklit(s.var, true));
      fixed_false_weight += s.weight;
    }
  }
  incumbent.penalty = best;
  incumbent.achieved = detail::soft_weight_total(softs) - best;
  return incumbent;
}

// Exhaustive oracle: explores soft subsets in decreasing-weight order with
// an admissible bound. Only the optimum weight is meaningful.
inline SolveResult oracle_wpmaxsmt(SmtProblem& prob,
                                   const std::vector<SoftItem>& softs) {
  if (softs.size() > 24)
    throw std::invalid_argument("oracle_wpmaxsmt: instance too large");
  std::vector<SoftItem> order = softs;
  std::stable_sort(order.begin(), order.end(),
                   [](const SoftItem& a, const SoftItem& b) {
                     return a.weight > b.weight;
                   });
  std::vector<long long> suffix(order.size() + 1, 0);
  for (size_t i = order.size(); i-- > 0;)
    suffix[i] = suffix[i + 1] + order[i].weight;
  SolveResult best;
  long long best_achieved = -1;
  std::vector<Lit> chosen;
  auto rec = [&](auto&& self, size_t i, long long achieved) -> void {
    if (achieved + suffix[i] <= best_achieved) return;  // cannot improve
    if (i == order.size()) {
      SmtOutcome r = smt_solve(prob, chosen);
      if (r.sat && achieved > best_achieved) {
        best_achieved = achieved;
        best.model = std::move(r.model);
        best.subst = std::move(r.subst);
      }
      return;
    }
    chosen.push_back(mklit(order[i].var));
    self(self, i + 1, achieved + order[i].weight);
    chosen.back() = mklit(order[i].var, true);
    self(self, i + 1, achieved);
    chosen.pop_back();
  };
  rec(rec, 0, 0);
  if (best_achieved < 0) throw HardUnsat();
  best.achieved = best_achieved;
  best.penalty = detail::soft_weight_total(softs) - best_achieved;
  return best;
}

// ---------------------------------------------------------------------------
// Encoding of constraint instances.
// ---------------------------------------------------------------------------
struct EncodedInstance {
  SmtProblem problem;
  std::vector<int> prop_var;        // LocId -> boolean var
  std::map<LocId, int> pvar_var;    // def LocId -> boolean var
  std::vector<SoftItem> softs;      // in instance soft order
  std::vector<std::pair<LocId, int>> soft_locs;  // (location, weight)
};

inline EncodedInstance encode(const Instance& inst) {
  EncodedInstance enc;
  enc.prop_var.resize(inst.loc_paths.size());
  for (size_t i = 0; i < inst.loc_paths.size(); ++i)
    enc.prop_var[i] = enc.problem.new_var(true);
  for (const auto& pd : inst.pdefs)
    enc.pvar_var[pd.def] = enc.problem.new_var(true);
  // Guarded assertions also mention P-variables of definitions that have a
  // PDef; create missing ones defensively.
  auto pvar = [&](LocId d) {
    auto it = enc.pvar_var.find(d);
    if (it != enc.pvar_var.end()) return it->second;
    int v = enc.problem.new_var(true);
    enc.pvar_var[d] = v;
    return v;
  };
  for (LocId l : inst.hard_true)
    enc.problem.add_clause({mklit(enc.prop_var[static_cast<size_t>(l)])});
  for (const auto& a : inst.asserts) {
    std::vector<Lit> c;
    for (const auto& g : a.guards) {
      int v = g.is_pvar ? pvar(g.loc)
                        : enc.prop_var[static_cast<size_t>(g.loc)];
      c.push_back(mklit(v, true));
    }
    c.push_back(mklit(enc.problem.atom_var(a.lhs, a.rhs)));
    enc.problem.add_clause(std::move(c));
  }
  for (const auto& pd : inst.pdefs) {
    int P = pvar(pd.def);
    std::vector<Lit> rev;
    rev.push_back(mklit(P));
    for (LocId l : pd.props) {
      int v = enc.prop_var[static_cast<size_t>(l)];
      enc.problem.add_clause({mklit(P, true), mklit(v)});
      rev.push_back(mklit(v, true));
    }
    for (LocId d : pd.deps) {
      int v = pvar(d);
      enc.problem.add_clause({mklit(P, true), mklit(v)});
      rev.push_back(mklit(v, true));
    }
    enc.problem.add_clause(std::move(rev));
  }
  for (const auto& [loc, w] : inst.softs) {
    enc.softs.push_back(SoftItem{enc.prop_var[static_cast<size_t>(loc)], w});
    enc.soft_locs.emplace_back(loc, w);
  }
  return enc;
}

// Grounds a resolved term by defaulting leftover variables to int.
inline TypeRef ground_default(const TypeRef& t) {
  if (t->kind == TyKind::Var) return ty_int();
  if (t->args.empty()) return t;
  auto out = std::make_shared<TypeTerm>(*t);
  for (auto& a : out->args) a = ground_default(a);
  return out;
}

}  // namespace tyloc
