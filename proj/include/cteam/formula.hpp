#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cteam/signature.hpp"

namespace cteam {

enum class Kind : std::uint8_t { Eq, Bot, Top, Neg, And, Or, IntDisj, Dep, Cf, SelImp };

struct Node;
using Formula = std::shared_ptr<const Node>;

// Immutable AST node; subtrees are shared. `size` counts tree nodes
// (saturating), so shared subtrees are counted once per occurrence.
struct Node {
  Kind kind = Kind::Bot;
  VarId var = 0;                // Eq variable, Dep target
  ValId val = 0;                // Eq value
  std::vector<VarId> dep_vars;  // Dep determiners
  EquationSeq antecedent;       // Cf
  Formula a, b;                 // children; Cf consequent is a
  std::uint64_t hash = 0;
  std::uint64_t size = 1;
  bool has_dep = false;
  bool has_idisj = false;
  bool has_cf = false;
  bool bad = false;  // violates the negation / selective-implication restriction
};

namespace detail {

inline Node node_of(Kind k) {
  Node n;
  n.kind = k;
  return n;
}

inline std::uint64_t hmix(std::uint64_t h, std::uint64_t x) {
  h ^= x + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  return h * 0xFF51AFD7ED558CCDULL;
}

inline Formula finish(Node n) {
  std::uint64_t h = hmix(0x51ed27, static_cast<std::uint64_t>(n.kind));
  h = hmix(h, n.var);
  h = hmix(h, n.val);
  for (auto v : n.dep_vars) h = hmix(h, 0x100000ULL + v);
  for (auto e : n.antecedent) h = hmix(hmix(h, 0x200000ULL + e.var), e.val);
  auto sat = [](std::uint64_t x, std::uint64_t y) {
    return x > ~std::uint64_t{0} - y ? ~std::uint64_t{0} : x + y;
  };
  for (const Formula* c : {&n.a, &n.b}) {
    if (!*c) continue;
    h = hmix(h, (*c)->hash);
    n.size = sat(n.size, (*c)->size);
    n.has_dep |= (*c)->has_dep;
    n.has_idisj |= (*c)->has_idisj;
    n.has_cf |= (*c)->has_cf;
    n.bad |= (*c)->bad;
  }
  if ((n.kind == Kind::Neg || n.kind == Kind::SelImp) && (n.a->has_dep || n.a->has_idisj))
    n.bad = true;
  if (n.kind == Kind::Dep) n.has_dep = true;
  if (n.kind == Kind::IntDisj) n.has_idisj = true;
  if (n.kind == Kind::Cf) n.has_cf = true;
  n.hash = h;
  return std::make_shared<const Node>(std::move(n));
}

inline Formula binary(Kind k, Formula a, Formula b) {
  Node n = node_of(k);
  n.a = std::move(a);
  n.b = std::move(b);
  return finish(std::move(n));
}

}  // namespace detail

inline Formula eq(VarId v, ValId x) {
  Node n = detail::node_of(Kind::Eq);
  n.var = v;
  n.val = x;
  return detail::finish(std::move(n));
}
inline Formula bot() { return detail::finish(detail::node_of(Kind::Bot)); }
inline Formula top() { return detail::finish(detail::node_of(Kind::Top)); }
inline Formula neg(Formula a) {
  Node n = detail::node_of(Kind::Neg);
  n.a = std::move(a);
  return detail::finish(std::move(n));
}
inline Formula neq(VarId v, ValId x) { return neg(eq(v, x)); }
inline Formula conj(Formula a, Formula b) { return detail::binary(Kind::And, std::move(a), std::move(b)); }
inline Formula disj(Formula a, Formula b) { return detail::binary(Kind::Or, std::move(a), std::move(b)); }
inline Formula idisj(Formula a, Formula b) { return detail::binary(Kind::IntDisj, std::move(a), std::move(b)); }
inline Formula selimp(Formula a, Formula b) { return detail::binary(Kind::SelImp, std::move(a), std::move(b)); }
inline Formula dep(std::vector<VarId> xs, VarId y) {
  Node n = detail::node_of(Kind::Dep);
  n.dep_vars = std::move(xs);
  n.var = y;
  return detail::finish(std::move(n));
}
inline Formula con(VarId y) { return dep({}, y); }
inline Formula cf(EquationSeq ant, Formula a) {
  if (ant.empty()) throw Error("counterfactual with empty antecedent");
  Node n = detail::node_of(Kind::Cf);
  n.antecedent = std::move(ant);
  n.a = std::move(a);
  return detail::finish(std::move(n));
}

inline bool same(const Formula& x, const Formula& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->hash != y->hash || x->kind != y->kind || x->var != y->var || x->val != y->val ||
      x->dep_vars != y->dep_vars || x->antecedent != y->antecedent)
    return false;
  return same(x->a, y->a) && same(x->b, y->b);
}

// Right-nested chains; the empty conjunction is Top, the empty disjunctions Bot.
inline Formula big(Kind k, const std::vector<Formula>& fs) {
  if (fs.empty()) return k == Kind::And ? top() : bot();
  Formula acc = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) acc = detail::binary(k, fs[i], acc);
  return acc;
}
inline Formula big_and(const std::vector<Formula>& fs) { return big(Kind::And, fs); }
inline Formula big_or(const std::vector<Formula>& fs) { return big(Kind::Or, fs); }
inline Formula big_idisj(const std::vector<Formula>& fs) { return big(Kind::IntDisj, fs); }

// X1=x1 /\ ... /\ Xn=xn as a formula; empty sequence gives Top.
inline Formula eqs_formula(const EquationSeq& eqs) {
  std::vector<Formula> fs;
  for (auto e : eqs) fs.push_back(eq(e.var, e.val));
  return big_and(fs);
}

// Unfolds a right-nested chain of connective k.
inline std::vector<Formula> chain_items(const Formula& f, Kind k) {
  std::vector<Formula> out;
  Formula cur = f;
  while (cur->kind == k) {
    out.push_back(cur->a);
    cur = cur->b;
  }
  out.push_back(cur);
  return out;
}

// Bot's concrete reading X=x /\ X!=x with the first variable and value.
inline Formula expand_bot() { return conj(eq(0, 0), neq(0, 0)); }

inline bool is_falsum(const Formula& f) {
  if (f->kind == Kind::Bot) return true;
  return f->kind == Kind::And && f->a->kind == Kind::Eq && f->b->kind == Kind::Neg &&
         same(f->a, f->b->a);
}

inline bool is_co(const Formula& f) { return !f->has_dep && !f->has_idisj; }

enum class Dialect { CO, COD, COi, IllFormed };

inline const char* dialect_name(Dialect d) {
  switch (d) {
    case Dialect::CO: return "CO";
    case Dialect::COD: return "COD";
    case Dialect::COi: return "COi";
    case Dialect::IllFormed: return "ill-formed";
  }
  return "?";
}

using Path = std::vector<int>;

struct Classification {
  Dialect dialect;
  Path path;           // offending subformula when ill-formed
  std::string reason;  // empty unless ill-formed
};

namespace detail {

inline bool find_bad(const Formula& f, Path& path, std::string& reason) {
  if (!f->bad) return false;
  if ((f->kind == Kind::Neg || f->kind == Kind::SelImp) && !is_co(f->a)) {
    reason = f->kind == Kind::Neg ? "negation applies only to CO formulas"
                                  : "left side of => must be a CO formula";
    return true;
  }
  int i = 0;
  for (const Formula* c : {&f->a, &f->b}) {
    if (*c) {
      path.push_back(i);
      if (find_bad(*c, path, reason)) return true;
      path.pop_back();
    }
    ++i;
  }
  return false;
}

inline bool find_kind(const Formula& f, Kind k, Path& path) {
  if (f->kind == k) return true;
  int i = 0;
  for (const Formula* c : {&f->a, &f->b}) {
    if (*c && (k == Kind::Dep ? (*c)->has_dep : (*c)->has_idisj)) {
      path.push_back(i);
      if (find_kind(*c, k, path)) return true;
      path.pop_back();
    }
    ++i;
  }
  return false;
}

}  // namespace detail

inline Classification classify(const Formula& f) {
  Classification c{Dialect::CO, {}, {}};
  if (detail::find_bad(f, c.path, c.reason)) {
    c.dialect = Dialect::IllFormed;
    return c;
  }
  if (f->has_dep && f->has_idisj) {
    c.dialect = Dialect::IllFormed;
    c.reason = "dependence atoms and intuitionistic disjunction in one formula";
    detail::find_kind(f, Kind::IntDisj, c.path);
    return c;
  }
  if (f->has_dep) c.dialect = Dialect::COD;
  else if (f->has_idisj) c.dialect = Dialect::COi;
  return c;
}

// Whether f lies in the language of dialect d (CO is contained in both).
inline bool in_language(const Formula& f, Dialect d) {
  auto c = classify(f).dialect;
  if (c == Dialect::IllFormed) return false;
  if (c == Dialect::CO) return true;
  return c == d;
}

inline void check_signature(const Formula& root, const Signature& sig) {
  std::unordered_set<const Node*> seen;
  std::vector<const Node*> stack{root.get()};
  auto check_var = [&](VarId v) {
    if (v >= sig.size()) throw Error("formula mentions a variable outside the signature");
  };
  while (!stack.empty()) {
    const Node* f = stack.back();
    stack.pop_back();
    if (!seen.insert(f).second) continue;
    switch (f->kind) {
      case Kind::Eq:
        check_var(f->var);
        if (f->val >= sig.range_size(f->var)) throw Error("formula value out of range");
        break;
      case Kind::Dep:
        for (auto v : f->dep_vars) check_var(v);
        check_var(f->var);
        break;
      case Kind::Cf:
        if (f->antecedent.empty()) throw Error("counterfactual with empty antecedent");
        for (auto e : f->antecedent) {
          check_var(e.var);
          if (e.val >= sig.range_size(e.var)) throw Error("antecedent value out of range");
        }
        break;
      default:
        break;
    }
    if (f->a) stack.push_back(f->a.get());
    if (f->b) stack.push_back(f->b.get());
  }
}

inline const Formula& subformula(const Formula& f, const Path& path) {
  const Formula* cur = &f;
  for (int i : path) {
    const Formula& next = i == 0 ? (*cur)->a : (*cur)->b;
    if (!next) throw Error("path leaves the formula");
    cur = &next;
  }
  return *cur;
}

inline Formula replace_at(const Formula& f, const Path& path, const Formula& g,
                          std::size_t depth = 0) {
  if (depth == path.size()) return g;
  Node n = *f;
  Formula& child = path[depth] == 0 ? n.a : n.b;
  if (!child) throw Error("path leaves the formula");
  child = replace_at(child, path, g, depth + 1);
  n.has_dep = n.has_idisj = n.has_cf = n.bad = false;
  n.size = 1;
  return detail::finish(std::move(n));
}

// Equation-(1) translation of dependence atoms into CO with intuitionistic
// disjunction.
inline Formula translate_dep(const Signature& sig, const std::vector<VarId>& xs, VarId y) {
  std::vector<Formula> ys;
  for (std::size_t v = 0; v < sig.range_size(y); ++v) ys.push_back(eq(y, static_cast<ValId>(v)));
  Formula constancy = big_idisj(ys);
  if (xs.empty()) return constancy;
  std::vector<Formula> cases;
  std::vector<ValId> vals(xs.size(), 0);
  while (true) {
    std::vector<Formula> parts;
    for (std::size_t i = 0; i < xs.size(); ++i) parts.push_back(eq(xs[i], vals[i]));
    parts.push_back(constancy);
    cases.push_back(big_and(parts));
    std::size_t i = xs.size();
    while (i > 0) {
      if (++vals[i - 1] < sig.range_size(xs[i - 1])) break;
      vals[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
  return big_or(cases);
}

// SelImp(a, p) becomes Or(Neg(a), p); with eliminate_dep, dependence atoms
// are replaced by their translation.
namespace detail {

inline Formula desugar_rec(const Formula& f, const Signature& sig, bool eliminate_dep,
                           std::unordered_map<const Node*, Formula>& memo) {
  if (auto it = memo.find(f.get()); it != memo.end()) return it->second;
  auto rec = [&](const Formula& g) { return desugar_rec(g, sig, eliminate_dep, memo); };
  Formula out;
  switch (f->kind) {
    case Kind::Eq:
    case Kind::Bot:
    case Kind::Top:
      out = f;
      break;
    case Kind::Dep:
      out = eliminate_dep ? translate_dep(sig, f->dep_vars, f->var) : f;
      break;
    case Kind::Neg:
      out = neg(rec(f->a));
      break;
    case Kind::SelImp:
      out = disj(neg(rec(f->a)), rec(f->b));
      break;
    case Kind::Cf:
      out = cf(f->antecedent, rec(f->a));
      break;
    case Kind::And:
    case Kind::Or:
    case Kind::IntDisj:
      out = binary(f->kind, rec(f->a), rec(f->b));
      break;
  }
  memo.emplace(f.get(), out);
  return out;
}

}  // namespace detail

inline Formula desugar(const Formula& f, const Signature& sig, bool eliminate_dep = false) {
  std::unordered_map<const Node*, Formula> memo;
  return detail::desugar_rec(f, sig, eliminate_dep, memo);
}

}  // namespace cteam
