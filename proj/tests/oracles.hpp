#pragma once

// Reference implementations written directly from the definitions, sharing
// no evaluation code with the library: interventions by fixpoint iteration,
// satisfaction with unrestricted covers, brute-force function components.

#include <functional>
#include <set>

#include "cteam/cteam.hpp"

namespace oracle {

using namespace cteam;

inline ValId lookup(const Signature& sig, const Mechanism& m, const std::vector<ValId>& vals) {
  std::size_t idx = 0;
  for (auto p : m.parents) idx = idx * sig.range_size(p) + vals[p];
  return m.table.at(idx);
}

inline bool is_compatible(const Assignment& s, const FunctionComponent& f) {
  for (std::size_t v = 0; v < f.size(); ++v)
    if (auto m = f.mechanism(static_cast<VarId>(v)))
      if (lookup(f.signature(), *m, s.values()) != s[static_cast<VarId>(v)]) return false;
  return true;
}

// Forces the equations, then re-applies every remaining mechanism until
// nothing changes (|dom| passes suffice on an acyclic graph).
inline Member intervene(const Member& m, const EquationSeq& eqs) {
  const auto& sig = m.fc.signature();
  FunctionComponent::Slots slots = m.fc.slots();
  std::vector<ValId> vals = m.assignment.values();
  for (auto e : eqs) {
    slots[e.var].reset();
    vals[e.var] = e.val;
  }
  for (std::size_t pass = 0; pass <= sig.size(); ++pass)
    for (std::size_t v = 0; v < sig.size(); ++v)
      if (slots[v]) vals[v] = lookup(sig, *slots[v], vals);
  return {Assignment(vals), FunctionComponent(m.fc.signature_ptr(), std::move(slots))};
}

using Team = std::vector<Member>;

inline bool consistent(const EquationSeq& eqs) {
  for (auto a : eqs)
    for (auto b : eqs)
      if (a.var == b.var && a.val != b.val) return false;
  return true;
}

// Satisfaction over a member set; a causal team is the member set of its
// rows with the shared function component.
inline bool sat(const Team& t, const Formula& f) {
  switch (f->kind) {
    case Kind::Top:
      return true;
    case Kind::Bot:
      return t.empty();
    case Kind::Eq:
      for (const auto& m : t)
        if (m.assignment[f->var] != f->val) return false;
      return true;
    case Kind::Neg:
      for (const auto& m : t)
        if (sat({m}, f->a)) return false;
      return true;
    case Kind::And:
      return sat(t, f->a) && sat(t, f->b);
    case Kind::IntDisj:
      return sat(t, f->a) || sat(t, f->b);
    case Kind::Or: {
      // Every member goes left, right, or both.
      std::size_t n = t.size();
      std::vector<int> where(n, 0);
      while (true) {
        Team l, r;
        for (std::size_t i = 0; i < n; ++i) {
          if (where[i] != 1) l.push_back(t[i]);
          if (where[i] != 0) r.push_back(t[i]);
        }
        if (sat(l, f->a) && sat(r, f->b)) return true;
        std::size_t i = 0;
        while (i < n && where[i] == 2) where[i++] = 0;
        if (i == n) return false;
        ++where[i];
      }
    }
    case Kind::Dep:
      for (const auto& m : t)
        for (const auto& k : t) {
          bool agree = true;
          for (auto x : f->dep_vars) agree = agree && m.assignment[x] == k.assignment[x];
          if (agree && m.assignment[f->var] != k.assignment[f->var]) return false;
        }
      return true;
    case Kind::Cf: {
      if (!consistent(f->antecedent)) return true;
      Team out;
      for (const auto& m : t) {
        Member r = intervene(m, f->antecedent);
        if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
      }
      return sat(out, f->a);
    }
    case Kind::SelImp: {
      Team sub;
      for (const auto& m : t)
        if (sat({m}, f->a)) sub.push_back(m);
      return sat(sub, f->b);
    }
  }
  return false;
}

inline Team members(const CausalTeam& t) {
  Team out;
  for (const auto& r : t.rows()) out.push_back({r, t.fc()});
  return out;
}
inline Team members(const GeneralizedCausalTeam& t) { return t.members(); }

inline bool sat(const CausalTeam& t, const Formula& f) { return sat(members(t), f); }
inline bool sat(const GeneralizedCausalTeam& t, const Formula& f) { return sat(members(t), f); }

// ~ by definition: same proper endogenous variables, and their functions
// agree on every full assignment.
inline bool similar(const FunctionComponent& f, const FunctionComponent& g) {
  const auto& sig = f.signature();
  auto nonconst = [&](const FunctionComponent& h, VarId v) {
    auto m = h.mechanism(v);
    if (!m) return false;
    std::set<ValId> outs(m->table.begin(), m->table.end());
    return outs.size() > 1;
  };
  for (std::size_t v = 0; v < sig.size(); ++v)
    if (nonconst(f, static_cast<VarId>(v)) != nonconst(g, static_cast<VarId>(v))) return false;
  for (std::uint64_t c = 0; c < sig.assignment_count(); ++c) {
    auto s = assignment_from_code(sig, c);
    for (std::size_t v = 0; v < sig.size(); ++v)
      if (nonconst(f, static_cast<VarId>(v)) &&
          lookup(sig, *f.mechanism(static_cast<VarId>(v)), s.values()) !=
              lookup(sig, *g.mechanism(static_cast<VarId>(v)), s.values()))
        return false;
  }
  return true;
}

// Every recursive function component by brute force: each variable is
// exogenous or has any parent subset and any table; cyclic choices dropped.
inline std::vector<FunctionComponent> all_fcs(const SignaturePtr& sig) {
  std::size_t n = sig->size();
  std::vector<std::vector<std::optional<Mechanism>>> options(n);
  for (std::size_t v = 0; v < n; ++v) {
    options[v].push_back(std::nullopt);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      if (mask >> v & 1) continue;
      Mechanism m;
      std::size_t rows = 1;
      for (std::size_t p = 0; p < n; ++p)
        if (mask >> p & 1) {
          m.parents.push_back(static_cast<VarId>(p));
          rows *= sig->range_size(static_cast<VarId>(p));
        }
      std::size_t r = sig->range_size(static_cast<VarId>(v));
      std::vector<ValId> table(rows, 0);
      while (true) {
        m.table = table;
        options[v].push_back(m);
        std::size_t i = 0;
        while (i < rows && ++table[i] == r) table[i++] = 0;
        if (i == rows) break;
      }
    }
  }
  std::vector<FunctionComponent> out;
  FunctionComponent::Slots cur(n);
  std::function<void(std::size_t)> rec = [&](std::size_t v) {
    if (v == n) {
      // Acyclic iff repeatedly removing parentless variables empties the graph.
      std::vector<bool> gone(n, false);
      bool progress = true;
      while (progress) {
        progress = false;
        for (std::size_t x = 0; x < n; ++x) {
          if (gone[x]) continue;
          bool free = true;
          if (cur[x])
            for (auto p : cur[x]->parents) free = free && gone[p];
          if (free) gone[x] = progress = true;
        }
      }
      if (std::all_of(gone.begin(), gone.end(), [](bool b) { return b; }))
        out.emplace_back(sig, cur);
      return;
    }
    for (const auto& o : options[v]) {
      cur[v] = o;
      rec(v + 1);
    }
  };
  rec(0);
  return out;
}

inline std::vector<Assignment> compatible_rows(const FunctionComponent& f) {
  std::vector<Assignment> out;
  for (std::uint64_t c = 0; c < f.signature().assignment_count(); ++c) {
    auto s = assignment_from_code(f.signature(), c);
    if (is_compatible(s, f)) out.push_back(s);
  }
  return out;
}

// Entailment by scanning explicit team lists.
inline bool entails(const std::vector<Team>& teams, const std::vector<Formula>& premises,
                    const Formula& conclusion) {
  for (const auto& t : teams) {
    bool all = true;
    for (const auto& p : premises) all = all && sat(t, p);
    if (all && !sat(t, conclusion)) return false;
  }
  return true;
}

}  // namespace oracle
