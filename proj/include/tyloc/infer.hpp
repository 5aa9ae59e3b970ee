#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tyloc/ast.hpp"
#include "tyloc/types.hpp"

namespace tyloc {

// Environment for principal-type inference. Let variables bind schemas;
// lambda binders bind monomorphic variables shared with constraint
// generation; None marks a let variable whose definition has no principal
// type (its usages are never typeable here).
struct InferEntry {
  enum Kind { Mono, Poly, None } kind = None;
  int var = -1;        // Mono
  TypeSchema schema;   // Poly
};

using InferEnv = std::map<std::string, InferEntry>;

inline InferEntry entry_mono(int v) { return InferEntry{InferEntry::Mono, v, {}}; }
inline InferEntry entry_poly(TypeSchema s) {
  return InferEntry{InferEntry::Poly, -1, std::move(s)};
}
inline InferEntry entry_none() { return InferEntry{}; }

inline const std::map<std::string, TypeSchema>& builtin_schemas() {
  static const std::map<std::string, TypeSchema> env = {
      {"+", monotype(ty_fun(ty_int(), ty_fun(ty_int(), ty_int())))},
      {"int_of_string", monotype(ty_fun(ty_str(), ty_int()))},
  };
  return env;
}

inline InferEnv builtin_infer_env() {
  InferEnv env;
  for (const auto& [name, schema] : builtin_schemas())
    env[name] = entry_poly(schema);
  return env;
}

namespace detail {

inline TypeRef instantiate(const TypeSchema& s, int& counter) {
  if (s.bound.empty()) return s.body;
  std::map<int, TypeRef> m;
  for (int v : s.bound) m[v] = ty_var(counter++);
  return rename_vars(s.body, m);
}

inline void env_free_vars(const InferEnv& env, const Substitution& s,
                          std::set<int>& out) {
  for (const auto& [name, e] : env) {
    (void)name;
    if (e.kind == InferEntry::Mono) {
      free_vars(s.apply(ty_var(e.var)), out);
    } else if (e.kind == InferEntry::Poly) {
      std::set<int> raw;
      free_vars(e.schema.body, raw);
      for (int b : e.schema.bound) raw.erase(b);
      for (int v : raw) free_vars(s.apply(ty_var(v)), out);
    }
  }
}

// Generalizes vars of τ under s that are not free in the environment,
// in first-occurrence order.
inline TypeSchema generalize(const InferEnv& env, const TypeRef& tau,
                             const Substitution& s) {
  TypeRef body = s.apply(tau);
  std::set<int> envfv;
  env_free_vars(env, s, envfv);
  std::vector<int> order;
  std::set<int> seen;
  struct Walk {
    static void run(const TypeRef& t, std::vector<int>& order,
                    std::set<int>& seen) {
      if (t->kind == TyKind::Var) {
        if (seen.insert(t->var).second) order.push_back(t->var);
        return;
      }
      for (const auto& a : t->args) run(a, order, seen);
    }
  };
  Walk::run(body, order, seen);
  TypeSchema out;
  out.body = body;
  for (int v : order)
    if (!envfv.count(v)) out.bound.push_back(v);
  return out;
}

// Classic constraint-collection-plus-unification inference over the
// tandem environment. Returns the resolved type of e or nullopt when e has
// no typing. The substitution threads through the whole call.
inline std::optional<TypeRef> infer(const InferEnv& env, const Expr& e,
                                    Substitution& s, int& counter) {
  switch (e.kind) {
    case ExprKind::Var: {
      auto it = env.find(e.name);
      if (it == env.end())
        throw std::logic_error("unbound variable in inference: " + e.name);
      switch (it->second.kind) {
        case InferEntry::Mono: return ty_var(it->second.var);
        case InferEntry::Poly: return instantiate(it->second.schema, counter);
        case InferEntry::None: return std::nullopt;
      }
      return std::nullopt;
    }
    case ExprKind::IntLit: return ty_int();
    case ExprKind::BoolLit: return ty_bool();
    case ExprKind::StrLit: return ty_str();
    case ExprKind::Hole: return ty_var(counter++);
    case ExprKind::Lambda: {
      InferEnv inner = env;
      TypeRef param;
      if (e.binder.tuple) {
        std::vector<TypeRef> parts;
        for (const auto& n : e.binder.names) {
          int v = counter++;
          parts.push_back(ty_var(v));
          if (n != "_") inner[n] = entry_mono(v);
        }
        param = ty_prod(std::move(parts));
      } else {
        int v = counter++;
        param = ty_var(v);
        if (e.binder.names[0] != "_") inner[e.binder.names[0]] = entry_mono(v);
      }
      auto body = infer(inner, e.children[0], s, counter);
      if (!body) return std::nullopt;
      return ty_fun(param, *body);
    }
    case ExprKind::App: {
      auto fn = infer(env, e.children[0], s, counter);
      if (!fn) return std::nullopt;
      auto arg = infer(env, e.children[1], s, counter);
      if (!arg) return std::nullopt;
      TypeRef res = ty_var(counter++);
      if (!unify_into(*fn, ty_fun(*arg, res), s)) return std::nullopt;
      return res;
    }
    case ExprKind::Cond: {
      auto c = infer(env, e.children[0], s, counter);
      if (!c || !unify_into(*c, ty_bool(), s)) return std::nullopt;
      auto t = infer(env, e.children[1], s, counter);
      if (!t) return std::nullopt;
      auto f = infer(env, e.children[2], s, counter);
      if (!f || !unify_into(*t, *f, s)) return std::nullopt;
      return t;
    }
    case ExprKind::Tuple: {
      std::vector<TypeRef> parts;
      for (const auto& c : e.children) {
        auto t = infer(env, c, s, counter);
        if (!t) return std::nullopt;
        parts.push_back(*t);
      }
      return ty_prod(std::move(parts));
    }
    case ExprKind::Let: {
      auto def = infer(env, e.children[0], s, counter);
      if (!def) return std::nullopt;
      InferEnv inner = env;
      inner[e.name] = entry_poly(generalize(env, *def, s));
      return infer(inner, e.children[1], s, counter);
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Principal type of a definition plus the bindings its inference imposed on
// variables that existed before the call (the enclosing lambda binders and
// anything reachable from them). Those bindings are part of what the
// definition asserts about its context.
struct PrincipalInfo {
  TypeSchema schema;
  std::vector<std::pair<int, TypeRef>> context_bindings;
};

inline std::optional<PrincipalInfo> principal_info(const InferEnv& env,
                                                   const Expr& e,
                                                   int& counter) {
  int watermark = counter;
  Substitution s;
  auto tau = detail::infer(env, e, s, counter);
  if (!tau) return std::nullopt;
  PrincipalInfo out;
  out.schema = detail::generalize(env, *tau, s);
  for (const auto& [v, t] : s.bindings()) {
    if (v >= watermark) continue;
    TypeRef resolved = s.apply(ty_var(v));
    if (resolved->kind == TyKind::Var && resolved->var == v) continue;
    out.context_bindings.emplace_back(v, resolved);
  }
  return out;
}

// ρ(Π, e): the principal type of e subject to Π, or nullopt when e has no
// typing under Π. Canonicalized by first occurrence of bound variables.
inline std::optional<TypeSchema> principal(
    const std::map<std::string, TypeSchema>& pi, const Expr& e) {
  int counter = 0;
  InferEnv env;
  for (const auto& [name, schema] : pi) {
    env[name] = entry_poly(schema);
    std::set<int> vs;
    free_vars(schema.body, vs);
    for (int v : vs) counter = std::max(counter, v + 1);
  }
  auto info = principal_info(env, e, counter);
  if (!info) return std::nullopt;
  return canonicalize(info->schema);
}

inline bool well_typed(const Expr& p) {
  return principal(builtin_schemas(), p).has_value();
}

// True iff σ' is a generic instance of σ: the body of σ' is obtainable from
// σ's body by substituting monotypes for σ's bound variables.
inline bool generic_instance(const TypeSchema& inst, const TypeSchema& gen) {
  int base = 0;
  std::set<int> vs;
  free_vars(inst.body, vs);
  free_vars(gen.body, vs);
  for (int v : vs) base = std::max(base, v + 1);
  // Skolemize σ' bound vars; make σ's bound vars flexible.
  std::map<int, TypeRef> skolem_map;
  std::set<int> skolems;
  for (int v : inst.bound) {
    skolem_map[v] = ty_var(base);
    skolems.insert(base);
    ++base;
  }
  TypeRef target = rename_vars(inst.body, skolem_map);
  std::map<int, TypeRef> flex_map;
  std::set<int> flex;
  for (int v : gen.bound) {
    flex_map[v] = ty_var(base);
    flex.insert(base);
    ++base;
  }
  TypeRef pattern = rename_vars(gen.body, flex_map);

  std::map<int, TypeRef> binding;
  struct Match {
    const std::set<int>* flex;
    std::map<int, TypeRef>* binding;
    bool run(const TypeRef& p, const TypeRef& t) {
      if (p->kind == TyKind::Var && flex->count(p->var)) {
        auto it = binding->find(p->var);
        if (it != binding->end()) return type_key(it->second) == type_key(t);
        (*binding)[p->var] = t;
        return true;
      }
      if (p->kind != t->kind) return false;
      if (p->kind == TyKind::Var) return p->var == t->var;
      if (p->args.size() != t->args.size()) return false;
      for (size_t i = 0; i < p->args.size(); ++i)
        if (!run(p->args[i], t->args[i])) return false;
      return true;
    }
  } m{&flex, &binding};
  return m.run(pattern, target);
}

}  // namespace tyloc
