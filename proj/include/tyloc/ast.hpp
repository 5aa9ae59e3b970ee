#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tyloc {

// Path from the AST root; the root is the empty path. Total order is
// lexicographic, which equals preorder position for paths in one tree.
struct Location {
  std::vector<int> path;

  Location() = default;
  explicit Location(std::vector<int> p) : path(std::move(p)) {}

  Location child(int i) const {
    Location c(*this);
    c.path.push_back(i);
    return c;
  }

  bool is_root() const { return path.empty(); }

  bool is_prefix_of(const Location& other) const {
    if (path.size() > other.path.size()) return false;
    return std::equal(path.begin(), path.end(), other.path.begin());
  }

  bool operator==(const Location& o) const { return path == o.path; }
  bool operator!=(const Location& o) const { return path != o.path; }
  bool operator<(const Location& o) const {
    return std::lexicographical_compare(path.begin(), path.end(),
                                        o.path.begin(), o.path.end());
  }

  std::string str() const {
    std::string s = "@";
    for (size_t i = 0; i < path.size(); ++i) {
      if (i) s += '.';
      s += std::to_string(path[i]);
    }
    return s;
  }
};

struct Span {
  int line = 0;  // 1-based; 0 means synthetic
  int col = 0;
};

enum class ExprKind {
  Var,
  IntLit,
  BoolLit,
  StrLit,
  Lambda,
  App,
  Cond,
  Let,
  Tuple,
  Hole,
};

// The binder of a lambda: either a single name or a tuple pattern of
// 2 or 3 names. "_" is a wildcard that binds nothing.
struct Binder {
  bool tuple = false;
  std::vector<std::string> names;  // size 1, or 2..3 when tuple
};

struct Expr {
  ExprKind kind = ExprKind::Hole;
  Span span;
  std::string name;       // Var: variable; Let: bound name
  Binder binder;          // Lambda only
  long long int_val = 0;  // IntLit
  bool bool_val = false;  // BoolLit
  std::string str_val;    // StrLit
  std::vector<Expr> children;
  // Lambda: [body]; App: [fn, arg]; Cond: [c, t, e];
  // Let: [def, body]; Tuple: [components...]
};

inline Expr make_var(std::string n, Span s = {}) {
  Expr e;
  e.kind = ExprKind::Var;
  e.name = std::move(n);
  e.span = s;
  return e;
}
inline Expr make_int(long long v, Span s = {}) {
  Expr e;
  e.kind = ExprKind::IntLit;
  e.int_val = v;
  e.span = s;
  return e;
}
inline Expr make_bool(bool v, Span s = {}) {
  Expr e;
  e.kind = ExprKind::BoolLit;
  e.bool_val = v;
  e.span = s;
  return e;
}
inline Expr make_str(std::string v, Span s = {}) {
  Expr e;
  e.kind = ExprKind::StrLit;
  e.str_val = std::move(v);
  e.span = s;
  return e;
}
inline Expr make_hole(Span s = {}) {
  Expr e;
  e.kind = ExprKind::Hole;
  e.span = s;
  return e;
}
inline Expr make_lambda(Binder b, Expr body, Span s = {}) {
  Expr e;
  e.kind = ExprKind::Lambda;
  e.binder = std::move(b);
  e.children.push_back(std::move(body));
  e.span = s;
  return e;
}
inline Expr make_lambda1(std::string param, Expr body, Span s = {}) {
  Binder b;
  b.names.push_back(std::move(param));
  return make_lambda(std::move(b), std::move(body), s);
}
inline Expr make_app(Expr fn, Expr arg, Span s = {}) {
  Expr e;
  e.kind = ExprKind::App;
  e.children.push_back(std::move(fn));
  e.children.push_back(std::move(arg));
  e.span = s;
  return e;
}
inline Expr make_cond(Expr c, Expr t, Expr f, Span s = {}) {
  Expr e;
  e.kind = ExprKind::Cond;
  e.children.push_back(std::move(c));
  e.children.push_back(std::move(t));
  e.children.push_back(std::move(f));
  e.span = s;
  return e;
}
inline Expr make_let(std::string n, Expr def, Expr body, Span s = {}) {
  Expr e;
  e.kind = ExprKind::Let;
  e.name = std::move(n);
  e.children.push_back(std::move(def));
  e.children.push_back(std::move(body));
  e.span = s;
  return e;
}
inline Expr make_tuple(std::vector<Expr> parts, Span s = {}) {
  if (parts.size() < 2 || parts.size() > 3)
    throw std::invalid_argument("tuple arity must be 2 or 3");
  Expr e;
  e.kind = ExprKind::Tuple;
  e.children = std::move(parts);
  e.span = s;
  return e;
}

struct InvalidLocation : std::runtime_error {
  explicit InvalidLocation(const Location& l)
      : std::runtime_error("invalid location " + l.str()) {}
};

inline const Expr* try_subexpr(const Expr& p, const Location& l) {
  const Expr* cur = &p;
  for (int i : l.path) {
    if (i < 0 || static_cast<size_t>(i) >= cur->children.size()) return nullptr;
    cur = &cur->children[static_cast<size_t>(i)];
  }
  return cur;
}

inline const Expr& subexpr(const Expr& p, const Location& l) {
  const Expr* e = try_subexpr(p, l);
  if (!e) throw InvalidLocation(l);
  return *e;
}

namespace detail {
template <typename F>
void walk(const Expr& e, Location& loc, F&& f) {
  f(e, static_cast<const Location&>(loc));
  for (size_t i = 0; i < e.children.size(); ++i) {
    loc.path.push_back(static_cast<int>(i));
    walk(e.children[i], loc, f);
    loc.path.pop_back();
  }
}
}  // namespace detail

// Preorder visit with locations.
template <typename F>
void walk_locations(const Expr& p, F&& f) {
  Location root;
  detail::walk(p, root, f);
}

// Loc(p), in preorder (= ascending lexicographic) order.
inline std::vector<Location> locations(const Expr& p) {
  std::vector<Location> out;
  walk_locations(p, [&](const Expr&, const Location& l) { out.push_back(l); });
  return out;
}

inline size_t node_count(const Expr& p) {
  size_t n = 0;
  walk_locations(p, [&](const Expr&, const Location&) { ++n; });
  return n;
}

// Keeps only locations that have no proper prefix in the set.
inline std::set<Location> prefix_antichain(const std::set<Location>& ls) {
  std::set<Location> out;
  for (const Location& l : ls) {
    bool covered = false;
    for (const Location& m : ls) {
      if (m != l && m.is_prefix_of(l)) {
        covered = true;
        break;
      }
    }
    if (!covered) out.insert(l);
  }
  return out;
}

// Replaces the subtree at each location in L by a hole. Masking a location
// masks its whole subtree, so only the prefix-antichain of L matters.
inline Expr mask(const Expr& p, const std::set<Location>& L) {
  for (const Location& l : L) {
    if (!try_subexpr(p, l)) throw InvalidLocation(l);
  }
  std::set<Location> roots = prefix_antichain(L);
  struct Rec {
    const std::set<Location>* roots;
    Expr run(const Expr& e, Location& loc) {
      if (roots->count(loc)) return make_hole(e.span);
      Expr out = e;
      out.children.clear();
      for (size_t i = 0; i < e.children.size(); ++i) {
        loc.path.push_back(static_cast<int>(i));
        out.children.push_back(run(e.children[i], loc));
        loc.path.pop_back();
      }
      return out;
    }
  } rec{&roots};
  Location root;
  return rec.run(p, root);
}

// Partial weight map; locations outside the domain are hard (never blamed).
struct CostFunction {
  std::map<Location, int> weights;

  bool has(const Location& l) const { return weights.count(l) != 0; }
  int at(const Location& l) const {
    auto it = weights.find(l);
    if (it == weights.end()) throw InvalidLocation(l);
    return it->second;
  }
  int total(const std::set<Location>& L) const {
    int t = 0;
    for (const Location& l : L) {
      auto it = weights.find(l);
      if (it != weights.end()) t += it->second;
    }
    return t;
  }
};

struct AstCostOptions {
  bool hard_builtin_usages = false;
  std::vector<std::string> builtins = {"+", "int_of_string"};
};

// Locations of builtin variable occurrences that are not shadowed by a
// program binding.
inline std::set<Location> builtin_usage_locations(
    const Expr& p, const std::vector<std::string>& builtins) {
  std::set<Location> out;
  struct Rec {
    const std::vector<std::string>* builtins;
    std::set<Location>* out;
    void run(const Expr& e, Location& loc, std::vector<std::string>& bound) {
      if (e.kind == ExprKind::Var &&
          std::find(bound.rbegin(), bound.rend(), e.name) == bound.rend() &&
          std::find(builtins->begin(), builtins->end(), e.name) !=
              builtins->end()) {
        out->insert(loc);
      }
      size_t pushed = 0;
      if (e.kind == ExprKind::Lambda) {
        for (const auto& n : e.binder.names)
          if (n != "_") {
            bound.push_back(n);
            ++pushed;
          }
      }
      for (size_t i = 0; i < e.children.size(); ++i) {
        if (e.kind == ExprKind::Let && i == 1) {
          bound.push_back(e.name);
          ++pushed;
        }
        loc.path.push_back(static_cast<int>(i));
        run(e.children[i], loc, bound);
        loc.path.pop_back();
      }
      bound.resize(bound.size() - pushed);
    }
  } rec{&builtins, &out};
  Location root;
  std::vector<std::string> bound;
  rec.run(p, root, bound);
  return out;
}

// Weight of a location = node count of its subtree. Holes get no weight
// (their props are hard), except the root, which is always soft. With
// hard_builtin_usages set, occurrences of library builtins are hard too.
inline CostFunction ast_size_cost(const Expr& p,
                                  const AstCostOptions& opt = {}) {
  std::set<Location> hard;
  if (opt.hard_builtin_usages) hard = builtin_usage_locations(p, opt.builtins);
  CostFunction cf;
  walk_locations(p, [&](const Expr& e, const Location& l) {
    if (!l.is_root()) {
      if (e.kind == ExprKind::Hole) return;
      if (hard.count(l)) return;
    }
    cf.weights[l] = static_cast<int>(node_count(e));
  });
  return cf;
}

}  // namespace tyloc
