#pragma once

#include <cassert>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tyloc/ast.hpp"
#include "tyloc/infer.hpp"
#include "tyloc/types.hpp"

namespace tyloc {

using LocId = int;

// Preorder enumeration of Loc(p). A node's subtree occupies the contiguous
// id range [id, subtree_end[id]).
struct LocTable {
  std::vector<Location> paths;
  std::vector<Span> spans;
  std::vector<LocId> subtree_end;
  std::map<Location, LocId> index;

  LocId id(const Location& l) const {
    auto it = index.find(l);
    if (it == index.end()) throw InvalidLocation(l);
    return it->second;
  }
  size_t size() const { return paths.size(); }
  bool in_subtree(LocId node, LocId root) const {
    return node >= root && node < subtree_end[root];
  }
};

inline LocTable build_loc_table(const Expr& p) {
  LocTable lt;
  walk_locations(p, [&](const Expr& e, const Location& l) {
    LocId id = static_cast<LocId>(lt.paths.size());
    lt.paths.push_back(l);
    lt.spans.push_back(e.span);
    lt.index[l] = id;
    lt.subtree_end.push_back(0);
  });
  // Subtree sizes: a node's subtree ends where its last descendant ends.
  for (size_t i = lt.paths.size(); i-- > 0;) {
    LocId end = static_cast<LocId>(i + 1);
    while (end < static_cast<LocId>(lt.paths.size()) &&
           lt.paths[i].is_prefix_of(lt.paths[end]))
      end = lt.subtree_end[end];
    lt.subtree_end[i] = end;
  }
  return lt;
}

// Antecedent of a guarded assertion: a location variable prop_l or a
// principal-type correctness variable P_l (keyed by definition location).
struct Guard {
  bool is_pvar = false;
  LocId loc = -1;
  bool operator==(const Guard& o) const {
    return is_pvar == o.is_pvar && loc == o.loc;
  }
};

inline Guard g_prop(LocId l) { return Guard{false, l}; }
inline Guard g_pvar(LocId l) { return Guard{true, l}; }

// guards_1 => ... => guards_n => lhs = rhs
struct Assertion {
  std::vector<Guard> guards;
  TypeRef lhs, rhs;
};

// P_def <=> /\ props /\ deps
struct PDef {
  LocId def = -1;
  std::vector<LocId> props;
  std::vector<LocId> deps;  // P-variables of definitions used inside
};

// Uloc / dloc / Vloc and the mandatory expansion set L0.
struct LocationIndex {
  std::map<LocId, std::vector<LocId>> uloc;  // def location -> usage locations
  std::map<LocId, LocId> dloc;               // usage -> def location
  std::map<LocId, std::vector<LocId>> vloc;  // def -> let-var usages in subtree
  std::set<LocId> frontier0;                 // L0
  std::set<LocId> welltyped_defs;
  std::vector<LocId> all_defs;     // preorder
  std::vector<LocId> usage_locs;   // preorder
};

namespace detail {

struct ScopeBinding {
  enum Kind { LetVar, LambdaVar, Builtin } kind;
  LocId def = -1;  // LetVar: root of the defining expression
};

inline void index_walk(const Expr& e, Location& loc, const LocTable& lt,
                       std::map<std::string, ScopeBinding>& scope,
                       InferEnv& ienv, int& counter, LocationIndex& out) {
  if (e.kind == ExprKind::Var) {
    auto it = scope.find(e.name);
    if (it != scope.end() && it->second.kind == ScopeBinding::LetVar) {
      LocId u = lt.id(loc);
      out.dloc[u] = it->second.def;
      out.uloc[it->second.def].push_back(u);
      out.usage_locs.push_back(u);
    }
    return;
  }
  if (e.kind == ExprKind::Let) {
    loc.path.push_back(0);
    LocId def_id = lt.id(loc);
    index_walk(e.children[0], loc, lt, scope, ienv, counter, out);
    loc.path.pop_back();

    out.all_defs.push_back(def_id);
    out.uloc.emplace(def_id, std::vector<LocId>{});
    auto info = principal_info(ienv, e.children[0], counter);
    if (info) out.welltyped_defs.insert(def_id);

    auto saved_scope = scope;
    auto saved_ienv = ienv;
    scope[e.name] = ScopeBinding{ScopeBinding::LetVar, def_id};
    ienv[e.name] = info ? entry_poly(info->schema) : entry_none();
    loc.path.push_back(1);
    index_walk(e.children[1], loc, lt, scope, ienv, counter, out);
    loc.path.pop_back();
    scope = saved_scope;
    ienv = saved_ienv;
    return;
  }
  if (e.kind == ExprKind::Lambda) {
    auto saved_scope = scope;
    auto saved_ienv = ienv;
    for (const auto& n : e.binder.names) {
      if (n == "_") {
        ++counter;
        continue;
      }
      scope[n] = ScopeBinding{ScopeBinding::LambdaVar, -1};
      ienv[n] = entry_mono(counter++);
    }
    loc.path.push_back(0);
    index_walk(e.children[0], loc, lt, scope, ienv, counter, out);
    loc.path.pop_back();
    scope = saved_scope;
    ienv = saved_ienv;
    return;
  }
  for (size_t i = 0; i < e.children.size(); ++i) {
    loc.path.push_back(static_cast<int>(i));
    index_walk(e.children[i], loc, lt, scope, ienv, counter, out);
    loc.path.pop_back();
  }
}

}  // namespace detail

// Precomputes Uloc, dloc, Vloc and L0. Well-typedness of each definition is
// decided by the principal-type oracle under the environment at that point.
inline LocationIndex build_index(const Expr& p, const LocTable& lt) {
  LocationIndex out;
  std::map<std::string, detail::ScopeBinding> scope;
  for (const auto& [name, schema] : builtin_schemas()) {
    (void)schema;
    scope[name] = detail::ScopeBinding{detail::ScopeBinding::Builtin, -1};
  }
  InferEnv ienv = builtin_infer_env();
  int counter = 0;
  Location root;
  detail::index_walk(p, root, lt, scope, ienv, counter, out);

  for (LocId d : out.all_defs) {
    std::vector<LocId> vs;
    for (LocId u : out.usage_locs)
      if (lt.in_subtree(u, d)) vs.push_back(u);
    out.vloc[d] = std::move(vs);
  }

  std::set<LocId> excluded;
  for (LocId d : out.all_defs) {
    if (!out.welltyped_defs.count(d)) continue;
    excluded.insert(d);
    for (LocId u : out.uloc.at(d)) excluded.insert(u);
  }
  for (LocId i = 0; i < static_cast<LocId>(lt.size()); ++i)
    if (!excluded.count(i)) out.frontier0.insert(i);
  return out;
}

// L0 plus every usage location; expansion never goes further (Lemma 3).
inline std::set<LocId> full_usage_expansion(const LocationIndex& idx) {
  std::set<LocId> L = idx.frontier0;
  L.insert(idx.usage_locs.begin(), idx.usage_locs.end());
  return L;
}

inline std::set<LocId> all_locations_set(const LocTable& lt) {
  std::set<LocId> L;
  for (LocId i = 0; i < static_cast<LocId>(lt.size()); ++i) L.insert(i);
  return L;
}

struct GenConfig {
  // When set, skips the fresh copy of a definition's constraints whenever
  // the definition has a principal type and its inference bound nothing in
  // the enclosing context (the copy would be self-contained and consistent).
  bool dup_opt = true;
};

struct GenResult {
  int result_var = -1;
  std::vector<Assertion> asserts;
  int fresh_end = 0;  // all fresh ids used are < fresh_end
};

namespace detail {

// Gamma binding: x : forall bound. (asserts ==> result)
struct GammaSchema {
  std::vector<int> bound;
  std::vector<Assertion> asserts;  // guard chains relative to the def root
  int result = -1;
};

// Pi binding for A-Var-Prin: x : forall a,delta. ({P_def => a = tau_p} ==> a)
struct PiBind {
  enum Kind { Mono, Prin, None } kind = None;
  int mono = -1;
  LocId def = -1;
  TypeRef tau_p;
  std::vector<int> delta;
};

struct GenEnvs {
  std::map<std::string, GammaSchema> gamma;
  std::map<std::string, PiBind> pi;
  InferEnv ienv;
};

class Generator {
 public:
  Generator(const LocTable& lt, const LocationIndex& idx,
            const std::set<LocId>& L, GenConfig cfg)
      : lt_(lt), idx_(idx), L_(L), cfg_(cfg) {}

  GenResult run(const Expr& p) {
    GenEnvs env;
    env.ienv = builtin_infer_env();
    for (const auto& [name, schema] : builtin_schemas()) {
      GammaSchema g;
      int a = counter_++;
      g.bound.push_back(a);
      g.asserts.push_back(Assertion{{}, ty_var(a), schema.body});
      g.result = a;
      env.gamma[name] = std::move(g);
      env.pi[name] = PiBind{};
    }
    GenResult res;
    Location root;
    std::vector<Guard> prefix;
    res.result_var = gen(p, root, prefix, env, &out_);
    res.asserts = std::move(out_);
    res.fresh_end = counter_;
    return res;
  }

 private:
  const LocTable& lt_;
  const LocationIndex& idx_;
  const std::set<LocId>& L_;
  GenConfig cfg_;
  int counter_ = 0;
  std::vector<Assertion> out_;

  bool has_abstracted_usage(LocId def) const {
    auto it = idx_.uloc.find(def);
    if (it == idx_.uloc.end()) return false;
    for (LocId u : it->second)
      if (!L_.count(u)) return true;
    return false;
  }

  void emit(std::vector<Assertion>* sink, std::vector<Guard> guards,
            TypeRef lhs, TypeRef rhs) {
    sink->push_back(Assertion{std::move(guards), std::move(lhs), std::move(rhs)});
  }

  static std::vector<Guard> extend(const std::vector<Guard>& prefix, Guard g) {
    std::vector<Guard> out = prefix;
    out.push_back(g);
    return out;
  }

  // Vars >= watermark in first-occurrence order over the buffer, then the
  // result var. These are exactly fv(Phi1) \ fv(Gamma).
  static std::vector<int> schema_bound(const std::vector<Assertion>& buf,
                                       int result, int watermark) {
    std::vector<int> order;
    std::set<int> seen;
    auto scan = [&](const TypeRef& t) {
      struct W {
        static void run(const TypeRef& t, int wm, std::vector<int>& order,
                        std::set<int>& seen) {
          if (t->kind == TyKind::Var) {
            if (t->var >= wm && seen.insert(t->var).second)
              order.push_back(t->var);
            return;
          }
          for (const auto& a : t->args) run(a, wm, order, seen);
        }
      };
      W::run(t, watermark, order, seen);
    };
    for (const auto& a : buf) {
      scan(a.lhs);
      scan(a.rhs);
    }
    if (result >= watermark && !seen.count(result)) order.push_back(result);
    return order;
  }

  std::map<int, TypeRef> freshen(const std::vector<int>& vars) {
    std::map<int, TypeRef> m;
    for (int v : vars) m[v] = ty_var(counter_++);
    return m;
  }

  void instantiate_schema(const GammaSchema& sch,
                          const std::vector<Guard>& use_chain, int target,
                          std::vector<Assertion>* sink) {
    std::map<int, TypeRef> m = freshen(sch.bound);
    emit(sink, use_chain, ty_var(target), rename_vars(ty_var(sch.result), m));
    for (const auto& a : sch.asserts) {
      std::vector<Guard> gs = use_chain;
      gs.insert(gs.end(), a.guards.begin(), a.guards.end());
      emit(sink, std::move(gs), rename_vars(a.lhs, m), rename_vars(a.rhs, m));
    }
  }

  int gen(const Expr& e, const Location& loc, const std::vector<Guard>& prefix,
          GenEnvs& env, std::vector<Assertion>* sink) {
    LocId here = lt_.id(loc);
    std::vector<Guard> chain = extend(prefix, g_prop(here));
    switch (e.kind) {
      case ExprKind::Hole:
        return counter_++;
      case ExprKind::IntLit: {
        int a = counter_++;
        emit(sink, chain, ty_var(a), ty_int());
        return a;
      }
      case ExprKind::BoolLit: {
        int a = counter_++;
        emit(sink, chain, ty_var(a), ty_bool());
        return a;
      }
      case ExprKind::StrLit: {
        int a = counter_++;
        emit(sink, chain, ty_var(a), ty_str());
        return a;
      }
      case ExprKind::Var: {
        if (L_.count(here)) {
          auto it = env.gamma.find(e.name);
          assert(it != env.gamma.end());
          int g = counter_++;
          instantiate_schema(it->second, chain, g, sink);
          return g;
        }
        auto it = env.pi.find(e.name);
        assert(it != env.pi.end() && it->second.kind == PiBind::Prin);
        const PiBind& pb = it->second;
        int g = counter_++;
        int inst = counter_++;
        std::map<int, TypeRef> m = freshen(pb.delta);
        emit(sink, chain, ty_var(g), ty_var(inst));
        emit(sink, extend(chain, g_pvar(pb.def)), ty_var(inst),
             rename_vars(pb.tau_p, m));
        return g;
      }
      case ExprKind::Lambda: {
        GenEnvs inner = env;
        TypeRef param;
        if (e.binder.tuple) {
          int in = counter_++;
          std::vector<TypeRef> parts;
          for (const auto& n : e.binder.names) {
            int v = counter_++;
            parts.push_back(ty_var(v));
            if (n != "_") bind_mono(inner, n, v);
          }
          emit(sink, chain, ty_var(in), ty_prod(std::move(parts)));
          param = ty_var(in);
        } else {
          int v = counter_++;
          param = ty_var(v);
          if (e.binder.names[0] != "_") bind_mono(inner, e.binder.names[0], v);
        }
        int body = gen(e.children[0], loc.child(0), chain, inner, sink);
        int g = counter_++;
        emit(sink, chain, ty_var(g), ty_fun(param, ty_var(body)));
        return g;
      }
      case ExprKind::App: {
        int fn = gen(e.children[0], loc.child(0), chain, env, sink);
        int arg = gen(e.children[1], loc.child(1), chain, env, sink);
        int g = counter_++;
        emit(sink, chain, ty_var(fn), ty_fun(ty_var(arg), ty_var(g)));
        return g;
      }
      case ExprKind::Cond: {
        int c = gen(e.children[0], loc.child(0), chain, env, sink);
        int t = gen(e.children[1], loc.child(1), chain, env, sink);
        int f = gen(e.children[2], loc.child(2), chain, env, sink);
        int g = counter_++;
        emit(sink, extend(chain, g_prop(lt_.id(loc.child(0)))), ty_var(c),
             ty_bool());
        emit(sink, extend(chain, g_prop(lt_.id(loc.child(1)))), ty_var(t),
             ty_var(g));
        emit(sink, extend(chain, g_prop(lt_.id(loc.child(2)))), ty_var(f),
             ty_var(g));
        return g;
      }
      case ExprKind::Tuple: {
        std::vector<TypeRef> parts;
        for (size_t i = 0; i < e.children.size(); ++i) {
          int v = gen(e.children[i], loc.child(static_cast<int>(i)), chain,
                      env, sink);
          parts.push_back(ty_var(v));
        }
        int g = counter_++;
        emit(sink, chain, ty_var(g), ty_prod(std::move(parts)));
        return g;
      }
      case ExprKind::Let: {
        Location def_loc = loc.child(0);
        LocId def_id = lt_.id(def_loc);
        bool expanded = L_.count(def_id) != 0;

        int watermark = counter_;
        std::vector<Assertion> buffer;
        std::vector<Guard> empty;
        int a1 = gen(e.children[0], def_loc, empty, env, &buffer);
        std::vector<int> bound = schema_bound(buffer, a1, watermark);

        std::optional<PrincipalInfo> info;
        if (!expanded || cfg_.dup_opt)
          info = principal_info(env.ienv, e.children[0], counter_);
        if (!expanded && !info)
          throw std::logic_error(
              "definition outside the expansion set has no principal type");

        bool omit_copy =
            cfg_.dup_opt && info && info->context_bindings.empty();
        if (!omit_copy) {
          std::map<int, TypeRef> m = freshen(bound);
          for (const auto& a : buffer) {
            std::vector<Guard> gs = chain;
            gs.insert(gs.end(), a.guards.begin(), a.guards.end());
            emit(sink, std::move(gs), rename_vars(a.lhs, m),
                 rename_vars(a.rhs, m));
          }
        }

        GenEnvs inner = env;
        inner.gamma[e.name] = GammaSchema{bound, buffer, a1};
        if (!expanded) {
          inner.pi[e.name] =
              PiBind{PiBind::Prin, -1, def_id, info->schema.body,
                     info->schema.bound};
          // The definition's inference may pin down enclosing binders; those
          // bindings hold exactly when the principal type is trusted. They
          // only matter while some usage is still abstracted.
          if (has_abstracted_usage(def_id))
            for (const auto& [v, t] : info->context_bindings)
              emit(sink, extend(chain, g_pvar(def_id)), ty_var(v), t);
        } else {
          inner.pi[e.name] = PiBind{};
        }
        inner.ienv[e.name] =
            info ? entry_poly(info->schema) : entry_none();

        int a2 = gen(e.children[1], loc.child(1), chain, inner, sink);
        int g = counter_++;
        emit(sink, chain, ty_var(g), ty_var(a2));
        return g;
      }
    }
    throw std::logic_error("unreachable expression kind");
  }

  void bind_mono(GenEnvs& env, const std::string& name, int v) {
    GammaSchema g;
    g.result = v;
    env.gamma[name] = std::move(g);
    env.pi[name] = PiBind{PiBind::Mono, v, -1, nullptr, {}};
    env.ienv[name] = entry_mono(v);
  }
};

}  // namespace detail

// The constraint typing relation of the expansion-parameterized system:
// emits guarded equalities for p with usages in L expanded and all other
// let-variable usages abstracted by principal types. Requires L0 <= L.
inline GenResult generate(const Expr& p, const LocTable& lt,
                          const LocationIndex& idx, const std::set<LocId>& L,
                          GenConfig cfg = {}) {
  detail::Generator g(lt, idx, L, cfg);
  return g.run(p);
}

// One definition per let: P_d <=> all props of the defining expression and
// the P-variables of every definition used inside it.
inline std::vector<PDef> pdefs(const LocTable& lt, const LocationIndex& idx) {
  std::vector<PDef> out;
  for (LocId d : idx.all_defs) {
    PDef pd;
    pd.def = d;
    for (LocId i = d; i < lt.subtree_end[d]; ++i) pd.props.push_back(i);
    std::set<LocId> deps;
    for (LocId u : idx.vloc.at(d)) deps.insert(idx.dloc.at(u));
    pd.deps.assign(deps.begin(), deps.end());
    out.push_back(std::move(pd));
  }
  return out;
}

// Weighted partial MaxSMT instance I(p, R, L).
struct Instance {
  std::vector<Location> loc_paths;          // id -> path
  std::vector<Assertion> asserts;
  std::vector<PDef> pdefs;
  std::vector<LocId> hard_true;             // props outside dom(R)
  std::vector<std::pair<LocId, int>> softs; // location order
  int result_var = -1;
  int fresh_end = 0;

  size_t assertion_count() const { return asserts.size() + pdefs.size(); }
};

inline Instance build_instance(const Expr& p, const LocTable& lt,
                               const LocationIndex& idx, const CostFunction& R,
                               const std::set<LocId>& L, GenConfig cfg = {}) {
  if (!R.has(Location{}))
    throw std::invalid_argument("cost function must cover the root location");
  GenResult gr = generate(p, lt, idx, L, cfg);
  Instance inst;
  inst.loc_paths = lt.paths;
  inst.asserts = std::move(gr.asserts);
  inst.pdefs = pdefs(lt, idx);
  inst.result_var = gr.result_var;
  inst.fresh_end = gr.fresh_end;
  for (LocId i = 0; i < static_cast<LocId>(lt.size()); ++i) {
    if (R.has(lt.paths[i]))
      inst.softs.emplace_back(i, R.at(lt.paths[i]));
    else
      inst.hard_true.push_back(i);
  }
  return inst;
}

// ---- Textual instance format (one line per item, stable) ----

namespace detail {

inline void emit_type_sexpr(std::ostream& os, const TypeRef& t) {
  switch (t->kind) {
    case TyKind::Int: os << "int"; break;
    case TyKind::Bool: os << "bool"; break;
    case TyKind::Str: os << "string"; break;
    case TyKind::Var: os << "(tv " << t->var << ")"; break;
    case TyKind::Fun:
      os << "(fun ";
      emit_type_sexpr(os, t->args[0]);
      os << ' ';
      emit_type_sexpr(os, t->args[1]);
      os << ')';
      break;
    case TyKind::Prod:
      os << "(prod";
      for (const auto& a : t->args) {
        os << ' ';
        emit_type_sexpr(os, a);
      }
      os << ')';
      break;
  }
}

}  // namespace detail

inline void emit_instance(std::ostream& os, const Instance& inst) {
  auto path = [&](LocId l) { return inst.loc_paths[l].str(); };
  os << "# wpmaxsmt-instance v1 asserts=" << inst.asserts.size()
     << " pdefs=" << inst.pdefs.size() << " softs=" << inst.softs.size()
     << "\n";
  for (const auto& [l, w] : inst.softs)
    os << "soft [w=" << w << "] prop " << path(l) << "\n";
  for (LocId l : inst.hard_true) os << "hard prop " << path(l) << "\n";
  for (const auto& a : inst.asserts) {
    os << "assert (guards";
    for (const auto& g : a.guards)
      os << " (" << (g.is_pvar ? "P " : "prop ") << path(g.loc) << ")";
    os << ") (= ";
    detail::emit_type_sexpr(os, a.lhs);
    os << ' ';
    detail::emit_type_sexpr(os, a.rhs);
    os << ")\n";
  }
  for (const auto& pd : inst.pdefs) {
    os << "pdef (P " << path(pd.def) << ") (and";
    for (LocId l : pd.props) os << " (prop " << path(l) << ")";
    for (LocId l : pd.deps) os << " (P " << path(l) << ")";
    os << ")\n";
  }
}

inline std::string emit_instance(const Instance& inst) {
  std::ostringstream os;
  emit_instance(os, inst);
  return os.str();
}

namespace detail {

struct SexprReader {
  const std::string& s;
  size_t i = 0;
  void skip() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) throw std::runtime_error("instance parse: expected '" +
                                          std::string(1, c) + "' in " + s);
  }
  std::string word() {
    skip();
    size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '(' && s[j] != ')' &&
           s[j] != '\t')
      ++j;
    std::string out = s.substr(i, j - i);
    i = j;
    return out;
  }
  TypeRef type() {
    skip();
    if (eat('(')) {
      std::string head = word();
      if (head == "tv") {
        int v = std::stoi(word());
        expect(')');
        return ty_var(v);
      }
      if (head == "fun") {
        TypeRef a = type();
        TypeRef r = type();
        expect(')');
        return ty_fun(std::move(a), std::move(r));
      }
      if (head == "prod") {
        std::vector<TypeRef> parts;
        while (!eat(')')) parts.push_back(type());
        return ty_prod(std::move(parts));
      }
      throw std::runtime_error("instance parse: unknown type head " + head);
    }
    std::string w = word();
    if (w == "int") return ty_int();
    if (w == "bool") return ty_bool();
    if (w == "string") return ty_str();
    throw std::runtime_error("instance parse: bad type token " + w);
  }
};

inline Location parse_path(const std::string& w) {
  if (w.empty() || w[0] != '@')
    throw std::runtime_error("instance parse: bad path " + w);
  Location l;
  size_t i = 1;
  while (i < w.size()) {
    size_t j = w.find('.', i);
    if (j == std::string::npos) j = w.size();
    l.path.push_back(std::stoi(w.substr(i, j - i)));
    i = j + 1;
  }
  return l;
}

}  // namespace detail

// Reads back the textual format. Locations are re-interned in order of
// first appearance; ids are local to the parsed instance.
inline Instance parse_instance(const std::string& text) {
  Instance inst;
  std::map<Location, LocId> interned;
  auto intern = [&](const Location& l) {
    auto it = interned.find(l);
    if (it != interned.end()) return it->second;
    LocId id = static_cast<LocId>(inst.loc_paths.size());
    inst.loc_paths.push_back(l);
    interned[l] = id;
    return id;
  };
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    detail::SexprReader r{line};
    std::string kind = r.word();
    if (kind == "soft") {
      r.skip();
      if (line.compare(r.i, 3, "[w=") != 0)
        throw std::runtime_error("instance parse: missing weight in " + line);
      r.i += 3;
      size_t close = line.find(']', r.i);
      int w = std::stoi(line.substr(r.i, close - r.i));
      r.i = close + 1;
      std::string p = r.word();
      if (p != "prop") throw std::runtime_error("instance parse: " + line);
      inst.softs.emplace_back(intern(detail::parse_path(r.word())), w);
    } else if (kind == "hard") {
      std::string p = r.word();
      if (p != "prop") throw std::runtime_error("instance parse: " + line);
      inst.hard_true.push_back(intern(detail::parse_path(r.word())));
    } else if (kind == "assert") {
      Assertion a;
      r.expect('(');
      std::string gs = r.word();
      if (gs != "guards") throw std::runtime_error("instance parse: " + line);
      while (!r.eat(')')) {
        r.expect('(');
        std::string gk = r.word();
        LocId l = intern(detail::parse_path(r.word()));
        r.expect(')');
        a.guards.push_back(gk == "P" ? g_pvar(l) : g_prop(l));
      }
      r.expect('(');
      std::string eq = r.word();
      if (eq != "=") throw std::runtime_error("instance parse: " + line);
      a.lhs = r.type();
      a.rhs = r.type();
      r.expect(')');
      std::set<int> vs;
      free_vars(a.lhs, vs);
      free_vars(a.rhs, vs);
      for (int v : vs) inst.fresh_end = std::max(inst.fresh_end, v + 1);
      inst.asserts.push_back(std::move(a));
    } else if (kind == "pdef") {
      PDef pd;
      r.expect('(');
      std::string pk = r.word();
      if (pk != "P") throw std::runtime_error("instance parse: " + line);
      pd.def = intern(detail::parse_path(r.word()));
      r.expect(')');
      r.expect('(');
      std::string anda = r.word();
      if (anda != "and") throw std::runtime_error("instance parse: " + line);
      while (!r.eat(')')) {
        r.expect('(');
        std::string gk = r.word();
        LocId l = intern(detail::parse_path(r.word()));
        r.expect(')');
        if (gk == "P")
          pd.deps.push_back(l);
        else
          pd.props.push_back(l);
      }
      inst.pdefs.push_back(std::move(pd));
    } else {
      throw std::runtime_error("instance parse: unknown line kind " + kind);
    }
  }
  return inst;
}

}  // namespace tyloc
