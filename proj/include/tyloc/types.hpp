#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace tyloc {

enum class TyKind { Int, Bool, Str, Var, Fun, Prod };

struct TypeTerm;
using TypeRef = std::shared_ptr<const TypeTerm>;

// Finite terms over the inductive datatype of ground monotypes, plus
// type variables. Values are immutable and shared freely.
struct TypeTerm {
  TyKind kind;
  int var = -1;               // Var
  std::vector<TypeRef> args;  // Fun: [arg, res]; Prod: 2..3 components
};

inline TypeRef ty_int() {
  static const TypeRef t = std::make_shared<TypeTerm>(TypeTerm{TyKind::Int});
  return t;
}
inline TypeRef ty_bool() {
  static const TypeRef t = std::make_shared<TypeTerm>(TypeTerm{TyKind::Bool});
  return t;
}
inline TypeRef ty_str() {
  static const TypeRef t = std::make_shared<TypeTerm>(TypeTerm{TyKind::Str});
  return t;
}
inline TypeRef ty_var(int id) {
  return std::make_shared<TypeTerm>(TypeTerm{TyKind::Var, id});
}
inline TypeRef ty_fun(TypeRef a, TypeRef r) {
  return std::make_shared<TypeTerm>(
      TypeTerm{TyKind::Fun, -1, {std::move(a), std::move(r)}});
}
inline TypeRef ty_prod(std::vector<TypeRef> parts) {
  return std::make_shared<TypeTerm>(
      TypeTerm{TyKind::Prod, -1, std::move(parts)});
}

inline bool is_ground(const TypeRef& t) {
  if (t->kind == TyKind::Var) return false;
  for (const auto& a : t->args)
    if (!is_ground(a)) return false;
  return true;
}

inline void free_vars(const TypeRef& t, std::set<int>& out) {
  if (t->kind == TyKind::Var) {
    out.insert(t->var);
    return;
  }
  for (const auto& a : t->args) free_vars(a, out);
}

inline std::set<int> free_vars(const TypeRef& t) {
  std::set<int> out;
  free_vars(t, out);
  return out;
}

// Idempotent binding of variables to terms. Value semantics: unify takes a
// substitution and returns an extended one, never mutating shared state.
class Substitution {
 public:
  bool empty() const { return m_.empty(); }
  size_t size() const { return m_.size(); }

  const TypeRef* lookup(int v) const {
    auto it = m_.find(v);
    return it == m_.end() ? nullptr : &it->second;
  }

  // Follows variable links until a non-variable term or an unbound variable.
  TypeRef walk(TypeRef t) const {
    while (t->kind == TyKind::Var) {
      const TypeRef* b = lookup(t->var);
      if (!b) return t;
      t = *b;
    }
    return t;
  }

  // Fully resolves a term.
  TypeRef apply(const TypeRef& t) const {
    TypeRef w = walk(t);
    if (w->args.empty()) return w;
    std::vector<TypeRef> args;
    args.reserve(w->args.size());
    bool changed = false;
    for (const auto& a : w->args) {
      TypeRef r = apply(a);
      changed |= (r != a);
      args.push_back(std::move(r));
    }
    if (!changed) return w;
    auto out = std::make_shared<TypeTerm>(*w);
    out->args = std::move(args);
    return out;
  }

  void bind(int v, TypeRef t) { m_[v] = std::move(t); }

  const std::map<int, TypeRef>& bindings() const { return m_; }

 private:
  std::map<int, TypeRef> m_;
};

namespace detail {

inline bool occurs(int v, const TypeRef& t, const Substitution& s) {
  TypeRef w = s.walk(t);
  if (w->kind == TyKind::Var) return w->var == v;
  for (const auto& a : w->args)
    if (occurs(v, a, s)) return true;
  return false;
}

inline bool unify_into(const TypeRef& a, const TypeRef& b, Substitution& s) {
  TypeRef x = s.walk(a);
  TypeRef y = s.walk(b);
  if (x->kind == TyKind::Var && y->kind == TyKind::Var && x->var == y->var)
    return true;
  if (x->kind == TyKind::Var) {
    if (occurs(x->var, y, s)) return false;
    s.bind(x->var, y);
    return true;
  }
  if (y->kind == TyKind::Var) {
    if (occurs(y->var, x, s)) return false;
    s.bind(y->var, x);
    return true;
  }
  if (x->kind != y->kind) return false;            // constructor clash
  if (x->args.size() != y->args.size()) return false;  // arity mismatch
  for (size_t i = 0; i < x->args.size(); ++i)
    if (!unify_into(x->args[i], y->args[i], s)) return false;
  return true;
}

}  // namespace detail

// Most general unifier extending s, or nullopt when none exists.
inline std::optional<Substitution> unify(const TypeRef& a, const TypeRef& b,
                                         Substitution s = {}) {
  if (detail::unify_into(a, b, s)) return s;
  return std::nullopt;
}

inline bool unifiable(const TypeRef& a, const TypeRef& b,
                      const Substitution& s = {}) {
  Substitution copy = s;
  return detail::unify_into(a, b, copy);
}

// Plain polytype: bound variables quantified over a monotype body.
struct TypeSchema {
  std::vector<int> bound;  // first-occurrence order
  TypeRef body;
};

inline TypeSchema monotype(TypeRef t) { return TypeSchema{{}, std::move(t)}; }

namespace detail {

inline void order_vars(const TypeRef& t, std::vector<int>& order,
                       std::set<int>& seen) {
  if (t->kind == TyKind::Var) {
    if (seen.insert(t->var).second) order.push_back(t->var);
    return;
  }
  for (const auto& a : t->args) order_vars(a, order, seen);
}

inline TypeRef rename(const TypeRef& t, const std::map<int, TypeRef>& m) {
  if (t->kind == TyKind::Var) {
    auto it = m.find(t->var);
    return it == m.end() ? t : it->second;
  }
  if (t->args.empty()) return t;
  auto out = std::make_shared<TypeTerm>(*t);
  for (auto& a : out->args) a = rename(a, m);
  return out;
}

}  // namespace detail

inline TypeRef rename_vars(const TypeRef& t, const std::map<int, TypeRef>& m) {
  return detail::rename(t, m);
}

// Reorders bound variables by first occurrence in the body so that equal
// schemas compare and print identically.
inline TypeSchema canonicalize(const TypeSchema& s) {
  std::vector<int> order;
  std::set<int> seen;
  detail::order_vars(s.body, order, seen);
  std::set<int> bound(s.bound.begin(), s.bound.end());
  TypeSchema out;
  for (int v : order)
    if (bound.count(v)) out.bound.push_back(v);
  out.body = s.body;
  return out;
}

inline std::string var_display(size_t index) {
  std::string name;
  size_t i = index;
  do {
    name.insert(name.begin(), static_cast<char>('a' + i % 26));
    i = i / 26;
  } while (i-- > 0);
  return name;
}

namespace detail {

// Precedence: 0 fun, 1 product, 2 atoms.
inline void print_type(std::ostream& os, const TypeRef& t,
                       const std::map<int, std::string>& names, int prec) {
  switch (t->kind) {
    case TyKind::Int: os << "int"; break;
    case TyKind::Bool: os << "bool"; break;
    case TyKind::Str: os << "string"; break;
    case TyKind::Var: {
      auto it = names.find(t->var);
      if (it != names.end())
        os << it->second;
      else
        os << "'t" << t->var;
      break;
    }
    case TyKind::Fun:
      if (prec > 0) os << '(';
      print_type(os, t->args[0], names, 1);
      os << " -> ";
      print_type(os, t->args[1], names, 0);
      if (prec > 0) os << ')';
      break;
    case TyKind::Prod:
      if (prec > 1) os << '(';
      for (size_t i = 0; i < t->args.size(); ++i) {
        if (i) os << " * ";
        print_type(os, t->args[i], names, 2);
      }
      if (prec > 1) os << ')';
      break;
  }
}

}  // namespace detail

inline std::string print_type(const TypeRef& t,
                              const std::map<int, std::string>& names = {}) {
  std::ostringstream os;
  detail::print_type(os, t, names, 0);
  return os.str();
}

// `∀a b. t` notation; bound variables named a, b, c, ... in order.
inline std::string print_schema(const TypeSchema& s0) {
  TypeSchema s = canonicalize(s0);
  std::map<int, std::string> names;
  for (size_t i = 0; i < s.bound.size(); ++i)
    names[s.bound[i]] = var_display(i);
  std::ostringstream os;
  if (!s.bound.empty()) {
    os << "∀";
    for (size_t i = 0; i < s.bound.size(); ++i) {
      if (i) os << ' ';
      os << names[s.bound[i]];
    }
    os << ". ";
  }
  detail::print_type(os, s.body, names, 0);
  return os.str();
}

// Stable structural key, used for atom deduplication and test comparisons.
inline std::string type_key(const TypeRef& t) {
  switch (t->kind) {
    case TyKind::Int: return "int";
    case TyKind::Bool: return "bool";
    case TyKind::Str: return "string";
    case TyKind::Var: return "v" + std::to_string(t->var);
    case TyKind::Fun:
      return "(f " + type_key(t->args[0]) + " " + type_key(t->args[1]) + ")";
    case TyKind::Prod: {
      std::string s = "(p";
      for (const auto& a : t->args) s += " " + type_key(a);
      return s + ")";
    }
  }
  return "?";
}

}  // namespace tyloc
