#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "tyloc/ast.hpp"
#include "tyloc/types.hpp"

namespace testgen {

// Brute-force typing judgment over a finite universe of ground monotypes.
// Independent of the unifier: let variables carry the extensional set of
// their checkable types, and applications search the universe for the
// argument type. Used to cross-check principality.
struct ExtensionalChecker {
  std::vector<tyloc::TypeRef> universe;

  ExtensionalChecker() {
    using namespace tyloc;
    std::vector<TypeRef> base = {ty_int(), ty_bool(), ty_str()};
    universe = base;
    for (const auto& a : base)
      for (const auto& b : base) {
        universe.push_back(ty_fun(a, b));
        universe.push_back(ty_prod({a, b}));
      }
  }

  using Env = std::map<std::string, std::set<std::string>>;  // name -> type keys

  static bool key_in(const Env& env, const std::string& n,
                     const tyloc::TypeRef& t) {
    auto it = env.find(n);
    return it != env.end() && it->second.count(tyloc::type_key(t)) != 0;
  }

  bool check(const Env& env, const tyloc::Expr& e,
             const tyloc::TypeRef& tau) const {
    using namespace tyloc;
    switch (e.kind) {
      case ExprKind::Hole: return true;
      case ExprKind::IntLit: return tau->kind == TyKind::Int;
      case ExprKind::BoolLit: return tau->kind == TyKind::Bool;
      case ExprKind::StrLit: return tau->kind == TyKind::Str;
      case ExprKind::Var: return key_in(env, e.name, tau);
      case ExprKind::Lambda: {
        if (tau->kind != TyKind::Fun) return false;
        Env inner = env;
        if (e.binder.tuple) {
          const TypeRef& param = tau->args[0];
          if (param->kind != TyKind::Prod ||
              param->args.size() != e.binder.names.size())
            return false;
          for (size_t i = 0; i < e.binder.names.size(); ++i)
            if (e.binder.names[i] != "_")
              inner[e.binder.names[i]] = {type_key(param->args[i])};
        } else if (e.binder.names[0] != "_") {
          inner[e.binder.names[0]] = {type_key(tau->args[0])};
        }
        return check(inner, e.children[0], tau->args[1]);
      }
      case ExprKind::App: {
        for (const auto& t1 : universe)
          if (check(env, e.children[1], t1) &&
              check(env, e.children[0], ty_fun(t1, tau)))
            return true;
        return false;
      }
      case ExprKind::Cond:
        return check(env, e.children[0], ty_bool()) &&
               check(env, e.children[1], tau) && check(env, e.children[2], tau);
      case ExprKind::Tuple: {
        if (tau->kind != TyKind::Prod ||
            tau->args.size() != e.children.size())
          return false;
        for (size_t i = 0; i < e.children.size(); ++i)
          if (!check(env, e.children[i], tau->args[i])) return false;
        return true;
      }
      case ExprKind::Let: {
        std::set<std::string> defs;
        for (const auto& t : universe)
          if (check(env, e.children[0], t)) defs.insert(tyloc::type_key(t));
        if (defs.empty()) return false;
        Env inner = env;
        inner[e.name] = std::move(defs);
        return check(inner, e.children[1], tau);
      }
    }
    return false;
  }

  Env builtin_env() const {
    using namespace tyloc;
    Env env;
    env["+"] = {type_key(ty_fun(ty_int(), ty_fun(ty_int(), ty_int())))};
    env["int_of_string"] = {type_key(ty_fun(ty_str(), ty_int()))};
    return env;
  }
};

}  // namespace testgen
