#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include "cteam/rng.hpp"
#include "cteam/team.hpp"

namespace cteam {

struct UniverseBudget {
  std::size_t max_sem_size = 18;
  std::size_t sample_count = 2000;
  std::uint64_t rng_seed = 0;
};

// Above this many function components the universe is treated as
// non-enumerable and only sampled.
inline constexpr long double kMaxEnumerableFcs = 2.0e5L;

inline std::vector<Assignment> enum_assignments(const Signature& sig) {
  std::vector<Assignment> out;
  std::uint64_t n = sig.assignment_count();
  out.reserve(n);
  for (std::uint64_t c = 0; c < n; ++c) out.push_back(assignment_from_code(sig, c));
  return out;
}

namespace detail {

inline long double ipow(long double b, long double e) { return std::pow(b, e); }

inline long double range_product(const Signature& sig, std::uint64_t mask) {
  long double p = 1;
  for (std::size_t v = 0; v < sig.size(); ++v)
    if (mask >> v & 1) p *= sig.range_size(static_cast<VarId>(v));
  return p;
}

inline bool acyclic(const std::vector<std::int64_t>& pa_masks) {
  // pa_masks[v] < 0 marks v exogenous.
  std::size_t n = pa_masks.size();
  std::uint64_t done = 0;
  for (std::size_t round = 0; round < n; ++round) {
    bool progress = false;
    for (std::size_t v = 0; v < n; ++v) {
      if (done >> v & 1) continue;
      std::uint64_t need = pa_masks[v] < 0 ? 0 : static_cast<std::uint64_t>(pa_masks[v]);
      if ((need & ~done) == 0) {
        done |= std::uint64_t{1} << v;
        progress = true;
      }
    }
    if (!progress) break;
  }
  return done == (n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
}

// Visits every acyclic parent structure; weight is the number of table
// choices for it.
inline void for_each_structure(const Signature& sig,
                               const std::function<void(const std::vector<std::int64_t>&)>& fn) {
  std::size_t n = sig.size();
  std::vector<std::int64_t> masks(n, -1);
  std::function<void(std::size_t)> rec = [&](std::size_t v) {
    if (v == n) {
      if (acyclic(masks)) fn(masks);
      return;
    }
    masks[v] = -1;
    rec(v + 1);
    std::uint64_t full = (std::uint64_t{1} << n) - 1;
    std::uint64_t others = full & ~(std::uint64_t{1} << v);
    for (std::uint64_t m = 0;; m = (m - others) & others) {
      masks[v] = static_cast<std::int64_t>(m);
      rec(v + 1);
      if (m == others) break;
    }
    masks[v] = -1;
  };
  rec(0);
}

}  // namespace detail

struct UniverseCounts {
  long double function_components = 0;
  long double sem = 0;
  long double causal_teams = 0;  // sum over F of 2^|compatible(F)|
};

// Closed-form sizes of the universes, computed from parent structures
// without materializing tables. Infinite when the domain is too large to
// scan structures.
inline UniverseCounts universe_counts(const Signature& sig) {
  UniverseCounts c;
  if (sig.size() > 5) {
    c.function_components = c.sem = c.causal_teams = std::numeric_limits<long double>::infinity();
    return c;
  }
  detail::for_each_structure(sig, [&](const std::vector<std::int64_t>& masks) {
    long double tables = 1;
    std::uint64_t exo = 0;
    for (std::size_t v = 0; v < masks.size(); ++v) {
      if (masks[v] < 0) {
        exo |= std::uint64_t{1} << v;
        continue;
      }
      tables *= detail::ipow(sig.range_size(static_cast<VarId>(v)),
                             detail::range_product(sig, static_cast<std::uint64_t>(masks[v])));
    }
    long double compat = detail::range_product(sig, exo);
    c.function_components += tables;
    c.sem += tables * compat;
    c.causal_teams += tables * detail::ipow(2.0L, compat);
  });
  return c;
}

inline bool fcs_enumerable(const Signature& sig) {
  return universe_counts(sig).function_components <= kMaxEnumerableFcs;
}

// Every recursive function component, in increasing order (see
// FunctionComponent::operator<=>): an odometer over per-variable options with
// the first variable slowest.
inline std::vector<FunctionComponent> enum_function_components(const SignaturePtr& sig) {
  if (!fcs_enumerable(*sig)) throw Error("signature too large to enumerate function components");
  std::size_t n = sig->size();
  std::vector<std::vector<std::optional<Mechanism>>> options(n);
  for (std::size_t v = 0; v < n; ++v) {
    options[v].push_back(std::nullopt);
    std::uint64_t others = ((std::uint64_t{1} << n) - 1) & ~(std::uint64_t{1} << v);
    // Parent masks in increasing numeric order.
    std::vector<std::uint64_t> masks;
    for (std::uint64_t m = 0;; m = (m - others) & others) {
      masks.push_back(m);
      if (m == others) break;
    }
    std::sort(masks.begin(), masks.end());
    for (auto m : masks) {
      Mechanism mech;
      for (std::size_t p = 0; p < n; ++p)
        if (m >> p & 1) mech.parents.push_back(static_cast<VarId>(p));
      std::size_t rows = 1;
      for (auto p : mech.parents) rows *= sig->range_size(p);
      std::size_t r = sig->range_size(static_cast<VarId>(v));
      std::vector<ValId> table(rows, 0);
      while (true) {
        mech.table = table;
        options[v].push_back(mech);
        std::size_t i = rows;
        while (i > 0) {
          if (++table[i - 1] < r) break;
          table[i - 1] = 0;
          --i;
        }
        if (i == 0) break;
      }
    }
  }
  std::vector<FunctionComponent> out;
  std::vector<std::size_t> pos(n, 0);
  std::vector<std::int64_t> masks(n);
  while (true) {
    for (std::size_t v = 0; v < n; ++v) {
      const auto& o = options[v][pos[v]];
      masks[v] = o ? static_cast<std::int64_t>(parent_mask(o->parents)) : -1;
    }
    if (detail::acyclic(masks)) {
      FunctionComponent::Slots slots(n);
      for (std::size_t v = 0; v < n; ++v) slots[v] = options[v][pos[v]];
      out.emplace_back(sig, std::move(slots));
    }
    std::size_t i = n;
    while (i > 0) {
      if (++pos[i - 1] < options[i - 1].size()) break;
      pos[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
  return out;
}

// All assignments compatible with f, in enumeration order.
inline std::vector<Assignment> compatible_assignments(const FunctionComponent& f) {
  const auto& sig = f.signature();
  std::vector<VarId> exo;
  for (std::size_t v = 0; v < sig.size(); ++v)
    if (!f.endogenous(static_cast<VarId>(v))) exo.push_back(static_cast<VarId>(v));
  std::vector<Assignment> out;
  std::vector<ValId> vals(sig.size(), 0);
  while (true) {
    out.push_back(complete_assignment(f, Assignment(vals)));
    std::size_t i = exo.size();
    while (i > 0) {
      auto v = exo[i - 1];
      if (++vals[v] < sig.range_size(v)) break;
      vals[v] = 0;
      --i;
    }
    if (i == 0) break;
  }
  sort_unique(out);
  return out;
}

// Materialized semantic universe of a small signature.
struct Universe {
  SignaturePtr sig;
  std::vector<Assignment> assignments;
  std::vector<FunctionComponent> fcs;
  std::vector<std::vector<Assignment>> compatible;  // parallel to fcs
  std::vector<std::size_t> class_of;               // fcs index -> reps index
  std::vector<std::size_t> rep_fc;                 // reps index -> fcs index
  std::vector<Member> sem;                          // ordered by fc, then assignment

  const FunctionComponent& rep(std::size_t i) const { return fcs[rep_fc[i]]; }
  std::size_t rep_count() const { return rep_fc.size(); }

  std::size_t fc_index(const FunctionComponent& f) const {
    auto it = std::lower_bound(fcs.begin(), fcs.end(), f);
    if (it == fcs.end() || !(*it == f)) throw Error("function component not in universe");
    return static_cast<std::size_t>(it - fcs.begin());
  }
  // Representative index of the ~-class of an arbitrary f.
  std::size_t class_index(const FunctionComponent& f) const {
    for (std::size_t i = 0; i < rep_fc.size(); ++i)
      if (fc_similar(rep(i), f)) return i;
    throw Error("function component has no representative");
  }
};

inline Universe build_universe(const SignaturePtr& sig) {
  Universe u;
  u.sig = sig;
  u.assignments = enum_assignments(*sig);
  u.fcs = enum_function_components(sig);
  for (std::size_t i = 0; i < u.fcs.size(); ++i) {
    const auto& f = u.fcs[i];
    u.compatible.push_back(compatible_assignments(f));
    std::optional<std::size_t> cls;
    for (std::size_t r = 0; r < u.rep_fc.size(); ++r)
      if (fc_similar(u.fcs[u.rep_fc[r]], f)) {
        cls = r;
        break;
      }
    if (!cls) {
      cls = u.rep_fc.size();
      u.rep_fc.push_back(i);
    }
    u.class_of.push_back(*cls);
    for (const auto& s : u.compatible.back()) u.sem.push_back({s, f});
  }
  return u;
}

inline std::vector<FunctionComponent> representatives(const SignaturePtr& sig) {
  Universe u = build_universe(sig);
  std::vector<FunctionComponent> out;
  for (auto i : u.rep_fc) out.push_back(u.fcs[i]);
  return out;
}

inline std::vector<Member> enum_sem(const SignaturePtr& sig) { return build_universe(sig).sem; }

struct EnumerationInfo {
  bool exact = true;
  std::uint64_t visited = 0;
};

// Random recursive function component: a random variable order, each
// variable endogenous with probability 1/2, parents drawn from earlier
// variables (at most max_parents), uniform table.
inline FunctionComponent random_function_component(const SignaturePtr& sig, CounterRng& rng,
                                                   std::size_t max_parents = 2) {
  std::size_t n = sig->size();
  std::vector<VarId> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<VarId>(i);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  FunctionComponent::Slots slots(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rng.coin()) continue;
    VarId v = order[i];
    Mechanism m;
    std::vector<VarId> earlier(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(i));
    for (std::size_t k = earlier.size(); k > 1; --k) std::swap(earlier[k - 1], earlier[rng.below(k)]);
    for (auto p : earlier) {
      if (m.parents.size() >= max_parents) break;
      if (rng.coin()) m.parents.push_back(p);
    }
    std::sort(m.parents.begin(), m.parents.end());
    std::size_t rows = 1;
    for (auto p : m.parents) rows *= sig->range_size(p);
    for (std::size_t r = 0; r < rows; ++r)
      m.table.push_back(static_cast<ValId>(rng.below(sig->range_size(v))));
    slots[v] = std::move(m);
  }
  return FunctionComponent(sig, std::move(slots));
}

inline Assignment random_compatible(const FunctionComponent& f, CounterRng& rng) {
  const auto& sig = f.signature();
  std::vector<ValId> vals(sig.size());
  for (std::size_t v = 0; v < sig.size(); ++v)
    vals[v] = static_cast<ValId>(rng.below(sig.range_size(static_cast<VarId>(v))));
  return complete_assignment(f, Assignment(std::move(vals)));
}

namespace detail {

template <class T>
std::vector<T> pick_bits(const std::vector<T>& items, std::uint64_t mask) {
  std::vector<T> out;
  for (std::size_t i = 0; i < items.size(); ++i)
    if (mask >> i & 1) out.push_back(items[i]);
  return out;
}

template <class T>
std::vector<T> pick_random(const std::vector<T>& items, CounterRng& rng) {
  std::vector<T> out;
  for (const auto& x : items)
    if (rng.coin()) out.push_back(x);
  return out;
}

}  // namespace detail

// Whether enum_causal_teams enumerates exactly under the budget: the number of
// causal teams must not exceed 2^max_sem_size.
inline bool ct_enumeration_exact(const Signature& sig, const UniverseBudget& b) {
  auto c = universe_counts(sig);
  return c.function_components <= kMaxEnumerableFcs &&
         c.causal_teams <= std::ldexp(1.0L, static_cast<int>(std::min<std::size_t>(b.max_sem_size, 60)));
}

inline bool gct_enumeration_exact(const Signature& sig, const UniverseBudget& b) {
  auto c = universe_counts(sig);
  return c.function_components <= kMaxEnumerableFcs &&
         c.sem <= static_cast<long double>(b.max_sem_size);
}

// Streams causal teams to fn until it returns false. Exact: for each F every
// subset of compatible(F), subsets by ascending bitmask. Otherwise
// budget.sample_count sampled teams.
inline EnumerationInfo enum_causal_teams(const SignaturePtr& sig, const UniverseBudget& budget,
                                         const std::function<bool(const CausalTeam&)>& fn,
                                         const Universe* universe = nullptr) {
  EnumerationInfo info;
  std::optional<Universe> local;
  bool enumerable = fcs_enumerable(*sig);
  if (enumerable && !universe) universe = &local.emplace(build_universe(sig));
  if (ct_enumeration_exact(*sig, budget)) {
    for (std::size_t i = 0; i < universe->fcs.size(); ++i) {
      const auto& rows = universe->compatible[i];
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << rows.size()); ++m) {
        ++info.visited;
        if (!fn(CausalTeam(universe->fcs[i], detail::pick_bits(rows, m)))) return info;
      }
    }
    return info;
  }
  info.exact = false;
  CounterRng root(budget.rng_seed);
  for (std::size_t k = 0; k < budget.sample_count; ++k) {
    CounterRng rng = root.split(k);
    ++info.visited;
    if (enumerable) {
      std::size_t i = rng.below(universe->fcs.size());
      if (!fn(CausalTeam(universe->fcs[i], detail::pick_random(universe->compatible[i], rng))))
        return info;
    } else {
      FunctionComponent f = random_function_component(sig, rng);
      std::vector<Assignment> rows;
      std::size_t m = rng.below(7);
      for (std::size_t j = 0; j < m; ++j) rows.push_back(random_compatible(f, rng));
      if (!fn(CausalTeam(f, std::move(rows)))) return info;
    }
  }
  return info;
}

inline EnumerationInfo enum_gcts(const SignaturePtr& sig, const UniverseBudget& budget,
                                 const std::function<bool(const GeneralizedCausalTeam&)>& fn,
                                 const Universe* universe = nullptr) {
  EnumerationInfo info;
  std::optional<Universe> local;
  bool enumerable = fcs_enumerable(*sig);
  if (enumerable && !universe) universe = &local.emplace(build_universe(sig));
  if (gct_enumeration_exact(*sig, budget)) {
    const auto& sem = universe->sem;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << sem.size()); ++m) {
      ++info.visited;
      if (!fn(GeneralizedCausalTeam(sig, detail::pick_bits(sem, m)))) return info;
    }
    return info;
  }
  info.exact = false;
  CounterRng root(budget.rng_seed);
  for (std::size_t k = 0; k < budget.sample_count; ++k) {
    CounterRng rng = root.split(k);
    ++info.visited;
    std::vector<Member> ms;
    if (enumerable) {
      ms = detail::pick_random(universe->sem, rng);
    } else {
      std::size_t m = rng.below(7);
      for (std::size_t j = 0; j < m; ++j) {
        FunctionComponent f = random_function_component(sig, rng);
        ms.push_back({random_compatible(f, rng), f});
      }
    }
    if (!fn(GeneralizedCausalTeam(sig, std::move(ms)))) return info;
  }
  return info;
}

// Every gct with at most k members, drawn from sem in index order.
inline void for_each_gct_up_to(const SignaturePtr& sig, const std::vector<Member>& sem,
                               std::size_t k,
                               const std::function<bool(const GeneralizedCausalTeam&)>& fn) {
  std::vector<std::size_t> idx;
  std::function<bool(std::size_t)> rec = [&](std::size_t start) {
    std::vector<Member> ms;
    for (auto i : idx) ms.push_back(sem[i]);
    if (!fn(GeneralizedCausalTeam(sig, std::move(ms)))) return false;
    if (idx.size() == k) return true;
    for (std::size_t i = start; i < sem.size(); ++i) {
      idx.push_back(i);
      bool go = rec(i + 1);
      idx.pop_back();
      if (!go) return false;
    }
    return true;
  };
  rec(0);
}

}  // namespace cteam
