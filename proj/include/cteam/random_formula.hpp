#pragma once

#include "cteam/formula.hpp"
#include "cteam/rng.hpp"

namespace cteam {

struct FormulaShape {
  int depth = 2;
  int max_antecedent = 2;
  bool allow_selimp = true;
  bool allow_constants = true;  // Bot and Top atoms
  bool allow_inconsistent = true;
};

inline Equation random_equation(const Signature& sig, CounterRng& rng) {
  auto v = static_cast<VarId>(rng.below(sig.size()));
  return {v, static_cast<ValId>(rng.below(sig.range_size(v)))};
}

inline EquationSeq random_antecedent(const Signature& sig, CounterRng& rng, const FormulaShape& shape) {
  std::size_t n = 1 + rng.below(static_cast<std::uint64_t>(std::max(1, shape.max_antecedent)));
  n = std::min(n, sig.size());
  EquationSeq out;
  while (out.size() < n) {
    Equation e = random_equation(sig, rng);
    if (shape.allow_inconsistent && rng.coin(1, 6)) {
      out.push_back(e);
      continue;
    }
    bool clash = false;
    for (const auto& o : out) clash |= o.var == e.var;
    if (!clash) out.push_back(e);
  }
  return out;
}

inline Formula random_atom(const Signature& sig, CounterRng& rng, Dialect d, const FormulaShape& shape) {
  auto r = rng.below(20);
  if (d == Dialect::COD && r < 5) {
    auto y = static_cast<VarId>(rng.below(sig.size()));
    std::vector<VarId> xs;
    if (r >= 2)
      for (std::size_t v = 0; v < sig.size(); ++v)
        if (v != y && rng.coin(1, 2)) xs.push_back(static_cast<VarId>(v));
    return dep(xs, y);
  }
  if (shape.allow_constants && r == 19) return rng.coin() ? bot() : top();
  Equation e = random_equation(sig, rng);
  return r < 14 ? eq(e.var, e.val) : neq(e.var, e.val);
}

// Random well-formed formula of dialect d (CO, COi or COD).
inline Formula random_formula(const Signature& sig, CounterRng& rng, Dialect d, const FormulaShape& shape) {
  if (shape.depth <= 0 || rng.coin(1, 5)) return random_atom(sig, rng, d, shape);
  FormulaShape sub = shape;
  sub.depth = shape.depth - 1;
  auto pick = rng.below(d == Dialect::COi ? 7 : 6);
  switch (pick) {
    case 0: return conj(random_formula(sig, rng, d, sub), random_formula(sig, rng, d, sub));
    case 1: return disj(random_formula(sig, rng, d, sub), random_formula(sig, rng, d, sub));
    case 2: return neg(random_formula(sig, rng, Dialect::CO, sub));
    case 3:
    case 4: return cf(random_antecedent(sig, rng, shape), random_formula(sig, rng, d, sub));
    case 5:
      if (shape.allow_selimp)
        return selimp(random_formula(sig, rng, Dialect::CO, sub), random_formula(sig, rng, d, sub));
      return conj(random_formula(sig, rng, d, sub), random_formula(sig, rng, d, sub));
    default: return idisj(random_formula(sig, rng, d, sub), random_formula(sig, rng, d, sub));
  }
}

inline Formula random_formula(const Signature& sig, CounterRng& rng, Dialect d, int depth = 2) {
  FormulaShape s;
  s.depth = depth;
  return random_formula(sig, rng, d, s);
}

}  // namespace cteam
