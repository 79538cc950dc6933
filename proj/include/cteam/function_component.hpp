#pragma once

#include <compare>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "cteam/signature.hpp"

namespace cteam {

// Structural function of one endogenous variable. Parents are strictly
// increasing in domain order; the table is indexed in mixed radix with the
// first parent most significant.
struct Mechanism {
  std::vector<VarId> parents;
  std::vector<ValId> table;

  bool constant() const {
    for (auto x : table)
      if (x != table.front()) return false;
    return true;
  }
  friend bool operator==(const Mechanism&, const Mechanism&) = default;
};

inline std::uint64_t parent_mask(const std::vector<VarId>& parents) {
  std::uint64_t m = 0;
  for (auto p : parents) m |= std::uint64_t{1} << p;
  return m;
}

inline std::strong_ordering compare_mechanisms(const Mechanism& a, const Mechanism& b) {
  if (auto c = parent_mask(a.parents) <=> parent_mask(b.parents); c != 0) return c;
  return a.table <=> b.table;
}

enum class TopoPreference { Low, High };

class FunctionComponent {
 public:
  using Slots = std::vector<std::optional<Mechanism>>;

  FunctionComponent(SignaturePtr sig, Slots slots) {
    auto impl = std::make_shared<Impl>();
    impl->sig = std::move(sig);
    impl->slots = std::move(slots);
    validate(*impl);
    impl->topo = compute_order(*impl, TopoPreference::Low);
    if (impl->topo.size() != impl->slots.size())
      throw Error("function component: causal graph is cyclic");
    impl_ = std::move(impl);
  }

  static FunctionComponent empty(SignaturePtr sig) {
    Slots slots(sig->size());
    return FunctionComponent(std::move(sig), std::move(slots));
  }

  const Signature& signature() const { return *impl_->sig; }
  const SignaturePtr& signature_ptr() const { return impl_->sig; }
  std::size_t size() const { return impl_->slots.size(); }

  bool endogenous(VarId v) const { return impl_->slots.at(v).has_value(); }
  const Mechanism* mechanism(VarId v) const {
    const auto& m = impl_->slots.at(v);
    return m ? &*m : nullptr;
  }
  const Slots& slots() const { return impl_->slots; }

  std::vector<VarId> endogenous_vars() const {
    std::vector<VarId> out;
    for (std::size_t v = 0; v < size(); ++v)
      if (impl_->slots[v]) out.push_back(static_cast<VarId>(v));
    return out;
  }

  // F_V applied to the parent values read off s.
  ValId eval(VarId v, const std::vector<ValId>& vals) const {
    const auto& m = *impl_->slots[v];
    std::size_t idx = 0;
    for (auto p : m.parents) idx = idx * signature().range_size(p) + vals[p];
    return m.table[idx];
  }
  ValId eval(VarId v, const Assignment& s) const { return eval(v, s.values()); }

  const std::vector<VarId>& topological_order() const { return impl_->topo; }
  std::vector<VarId> topological_order(TopoPreference pref) const {
    return pref == TopoPreference::Low ? impl_->topo : compute_order(*impl_, pref);
  }

  // The same system with the given variables made exogenous.
  FunctionComponent without(const std::vector<VarId>& vars) const {
    bool change = false;
    for (auto v : vars)
      if (impl_->slots.at(v)) change = true;
    if (!change) return *this;
    Slots slots = impl_->slots;
    for (auto v : vars) slots[v].reset();
    return FunctionComponent(impl_->sig, std::move(slots));
  }

  friend bool operator==(const FunctionComponent& a, const FunctionComponent& b) {
    return a.impl_ == b.impl_ || a.impl_->slots == b.impl_->slots;
  }
  // Lexicographic over variables in domain order: exogenous first, then by
  // parent set (as a bitmask) and table.
  friend std::strong_ordering operator<=>(const FunctionComponent& a,
                                          const FunctionComponent& b) {
    if (a.impl_ == b.impl_) return std::strong_ordering::equal;
    const auto& x = a.impl_->slots;
    const auto& y = b.impl_->slots;
    for (std::size_t v = 0; v < x.size() && v < y.size(); ++v) {
      if (x[v].has_value() != y[v].has_value())
        return x[v].has_value() ? std::strong_ordering::greater : std::strong_ordering::less;
      if (x[v]) {
        if (auto c = compare_mechanisms(*x[v], *y[v]); c != 0) return c;
      }
    }
    return x.size() <=> y.size();
  }

 private:
  struct Impl {
    SignaturePtr sig;
    Slots slots;
    std::vector<VarId> topo;
  };

  static void validate(const Impl& impl) {
    if (!impl.sig) throw Error("function component: no signature");
    const auto& sig = *impl.sig;
    if (impl.slots.size() != sig.size())
      throw Error("function component: slot count differs from domain size");
    for (std::size_t v = 0; v < sig.size(); ++v) {
      if (!impl.slots[v]) continue;
      const auto& m = *impl.slots[v];
      std::size_t rows = 1;
      for (std::size_t i = 0; i < m.parents.size(); ++i) {
        auto p = m.parents[i];
        if (p >= sig.size()) throw Error("function component: parent out of domain");
        if (p == v) throw Error("function component: '" + sig.name(p) + "' is its own parent");
        if (i && m.parents[i - 1] >= p)
          throw Error("function component: parents of '" + sig.name(static_cast<VarId>(v)) +
                      "' not in domain order");
        rows *= sig.range_size(p);
      }
      if (m.table.size() != rows)
        throw Error("function component: table of '" + sig.name(static_cast<VarId>(v)) +
                    "' is not total");
      for (auto x : m.table)
        if (x >= sig.range_size(static_cast<VarId>(v)))
          throw Error("function component: table of '" + sig.name(static_cast<VarId>(v)) +
                      "' leaves the range");
    }
  }

  // Kahn's algorithm; ties broken by lowest or highest index. Returns a short
  // list when the graph has a cycle.
  static std::vector<VarId> compute_order(const Impl& impl, TopoPreference pref) {
    std::size_t n = impl.slots.size();
    std::vector<std::size_t> indeg(n, 0);
    std::vector<std::vector<VarId>> children(n);
    for (std::size_t v = 0; v < n; ++v)
      if (impl.slots[v])
        for (auto p : impl.slots[v]->parents) {
          ++indeg[v];
          children[p].push_back(static_cast<VarId>(v));
        }
    std::vector<VarId> order;
    std::vector<bool> done(n, false);
    while (order.size() < n) {
      std::optional<std::size_t> pick;
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t v = pref == TopoPreference::Low ? i : n - 1 - i;
        if (!done[v] && indeg[v] == 0) {
          pick = v;
          break;
        }
      }
      if (!pick) break;
      done[*pick] = true;
      order.push_back(static_cast<VarId>(*pick));
      for (auto c : children[*pick]) --indeg[c];
    }
    return order;
  }

  std::shared_ptr<const Impl> impl_;
};

inline bool compatible(const Assignment& s, const FunctionComponent& f) {
  if (s.size() != f.size()) throw Error("signature mismatch");
  for (std::size_t v = 0; v < f.size(); ++v)
    if (f.endogenous(static_cast<VarId>(v)) &&
        f.eval(static_cast<VarId>(v), s) != s[static_cast<VarId>(v)])
      return false;
  return true;
}

inline std::vector<VarId> cn_set(const FunctionComponent& f) {
  std::vector<VarId> out;
  for (std::size_t v = 0; v < f.size(); ++v)
    if (auto m = f.mechanism(static_cast<VarId>(v)); m && m->constant())
      out.push_back(static_cast<VarId>(v));
  return out;
}

// En(f) \ Cn(f): the variables governed by a non-constant function.
inline std::vector<bool> proper_endogenous(const FunctionComponent& f) {
  std::vector<bool> out(f.size(), false);
  for (std::size_t v = 0; v < f.size(); ++v)
    if (auto m = f.mechanism(static_cast<VarId>(v)); m && !m->constant()) out[v] = true;
  return out;
}

// (s_{X=x}, f_{X=x}). Values of the remaining endogenous variables are
// recomputed along a topological order of the intervened graph.
inline std::pair<Assignment, FunctionComponent> intervene_pair(
    const Assignment& s, const FunctionComponent& f, const EquationSeq& eq,
    TopoPreference pref = TopoPreference::Low) {
  if (!eq_consistent(eq)) throw Error("intervention with inconsistent equations");
  if (s.size() != f.size()) throw Error("signature mismatch");
  FunctionComponent g = f.without(eq_vars(eq));
  std::vector<ValId> vals = s.values();
  for (const auto& e : eq) {
    if (e.var >= vals.size() || e.val >= f.signature().range_size(e.var))
      throw Error("intervention outside the signature");
    vals[e.var] = e.val;
  }
  std::vector<ValId>& buf = vals;
  for (auto v : g.topological_order(pref))
    if (g.endogenous(v)) {
      buf[v] = g.eval(v, buf);
    }
  return {Assignment(std::move(buf)), std::move(g)};
}

// Evaluate F_V ~ G_V: equal outputs on every valuation of the union of parents.
inline bool mechanisms_similar(const Signature& sig, const Mechanism& a, const Mechanism& b) {
  std::vector<VarId> vars;
  std::set_union(a.parents.begin(), a.parents.end(), b.parents.begin(), b.parents.end(),
                 std::back_inserter(vars));
  std::vector<ValId> vals(sig.size(), 0);
  auto lookup = [&](const Mechanism& m) {
    std::size_t idx = 0;
    for (auto p : m.parents) idx = idx * sig.range_size(p) + vals[p];
    return m.table[idx];
  };
  while (true) {
    if (lookup(a) != lookup(b)) return false;
    std::size_t i = vars.size();
    while (i > 0) {
      auto v = vars[i - 1];
      if (++vals[v] < sig.range_size(v)) break;
      vals[v] = 0;
      --i;
    }
    if (i == 0) return true;
  }
}

inline bool fc_similar(const FunctionComponent& f, const FunctionComponent& g) {
  require_same(f.signature(), g.signature());
  if (f == g) return true;
  auto ef = proper_endogenous(f);
  auto eg = proper_endogenous(g);
  if (ef != eg) return false;
  for (std::size_t v = 0; v < f.size(); ++v)
    if (ef[v] && !mechanisms_similar(f.signature(), *f.mechanism(static_cast<VarId>(v)),
                                     *g.mechanism(static_cast<VarId>(v))))
      return false;
  return true;
}

// Compatible completion of an exogenous valuation: endogenous entries of s are
// overwritten by their mechanisms.
inline Assignment complete_assignment(const FunctionComponent& f, const Assignment& s) {
  std::vector<ValId> buf = s.values();
  for (auto v : f.topological_order())
    if (f.endogenous(v)) buf[v] = f.eval(v, buf);
  return Assignment(std::move(buf));
}

}  // namespace cteam
