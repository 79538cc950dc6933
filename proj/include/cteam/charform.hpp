#pragma once

#include <set>

#include "cteam/enumeration.hpp"
#include "cteam/semantics.hpp"

namespace cteam {

namespace detail {

// All valuations of vars (in order), last variable fastest.
inline std::vector<EquationSeq> valuations(const Signature& sig, const std::vector<VarId>& vars) {
  std::vector<EquationSeq> out;
  std::vector<ValId> vals(vars.size(), 0);
  while (true) {
    EquationSeq e;
    for (std::size_t i = 0; i < vars.size(); ++i) e.push_back({vars[i], vals[i]});
    out.push_back(std::move(e));
    std::size_t i = vars.size();
    while (i > 0) {
      if (++vals[i - 1] < sig.range_size(vars[i - 1])) break;
      vals[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
  return out;
}

inline std::vector<VarId> domain_minus(const Signature& sig, std::initializer_list<VarId> drop,
                                       const std::vector<VarId>& drop_more = {}) {
  std::vector<VarId> out;
  for (std::size_t v = 0; v < sig.size(); ++v) {
    auto x = static_cast<VarId>(v);
    if (std::find(drop.begin(), drop.end(), x) != drop.end()) continue;
    if (std::find(drop_more.begin(), drop_more.end(), x) != drop_more.end()) continue;
    out.push_back(x);
  }
  return out;
}

// A counterfactual, or its consequent when the intervention is empty.
inline Formula cf_or_plain(EquationSeq ant, Formula consequent) {
  if (ant.empty()) return consequent;
  return cf(std::move(ant), std::move(consequent));
}

inline EquationSeq concat(EquationSeq a, const EquationSeq& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace detail

// Every intervention fixing all variables outside PA_V and V, together with a
// parent valuation p, yields V = F_V(p).
inline Formula eta(const FunctionComponent& f, VarId v) {
  const auto& sig = f.signature();
  const Mechanism& m = *f.mechanism(v);
  auto w = detail::domain_minus(sig, {v}, m.parents);
  std::vector<Formula> parts;
  for (const auto& wv : detail::valuations(sig, w))
    for (const auto& pv : detail::valuations(sig, m.parents)) {
      std::vector<ValId> vals(sig.size(), 0);
      for (auto e : pv) vals[e.var] = e.val;
      parts.push_back(detail::cf_or_plain(detail::concat(wv, pv), eq(v, f.eval(v, vals))));
    }
  return big_and(parts);
}

// V keeps its value under every intervention on the other variables.
inline Formula xi(const Signature& sig, VarId v) {
  auto w = detail::domain_minus(sig, {v});
  std::vector<Formula> parts;
  for (std::size_t x = 0; x < sig.range_size(v); ++x)
    for (const auto& wv : detail::valuations(sig, w)) {
      auto val = static_cast<ValId>(x);
      parts.push_back(selimp(eq(v, val), detail::cf_or_plain(wv, eq(v, val))));
    }
  return big_and(parts);
}

enum class PhiForm {
  Proper,   // eta over En \ Cn, xi over the rest
  Literal,  // eta over all of En, constants included
};

// Characteristic CO formula of the ~-class of f.
inline Formula phi_F(const FunctionComponent& f, PhiForm form = PhiForm::Proper) {
  const auto& sig = f.signature();
  auto proper = proper_endogenous(f);
  std::vector<Formula> parts;
  for (std::size_t v = 0; v < sig.size(); ++v) {
    bool use_eta = form == PhiForm::Proper ? proper[v] : f.endogenous(static_cast<VarId>(v));
    if (use_eta) parts.push_back(eta(f, static_cast<VarId>(v)));
  }
  for (std::size_t v = 0; v < sig.size(); ++v)
    if (!proper[v]) parts.push_back(xi(sig, static_cast<VarId>(v)));
  return big_and(parts);
}

inline Formula theta_T(const Signature& sig, std::vector<Assignment> rows) {
  sort_unique(rows);
  std::vector<Formula> ds;
  for (const auto& s : rows) {
    std::vector<Formula> cs;
    for (std::size_t v = 0; v < sig.size(); ++v)
      cs.push_back(eq(static_cast<VarId>(v), s[static_cast<VarId>(v)]));
    ds.push_back(big_and(cs));
  }
  return big_or(ds);
}

inline Formula constancy(const Signature& sig, VarId v, Dialect dialect) {
  return dialect == Dialect::COi ? translate_dep(sig, {}, v) : con(v);
}

inline Formula chi_one(const Signature& sig, Dialect dialect) {
  std::vector<Formula> cs;
  for (std::size_t v = 0; v < sig.size(); ++v) cs.push_back(constancy(sig, static_cast<VarId>(v), dialect));
  return big_and(cs);
}

// Constancy of every variable and of every response to interventions on the
// other variables.
inline Formula chi_one_star(const Signature& sig, Dialect dialect) {
  std::vector<Formula> cs;
  for (std::size_t v = 0; v < sig.size(); ++v) {
    auto x = static_cast<VarId>(v);
    Formula c = constancy(sig, x, dialect);
    std::vector<Formula> parts{c};
    auto w = detail::domain_minus(sig, {x});
    if (!w.empty())
      for (const auto& wv : detail::valuations(sig, w)) parts.push_back(cf(wv, c));
    cs.push_back(big_and(parts));
  }
  return big_and(cs);
}

inline Formula chi_from(const Formula& one, std::size_t k) {
  if (k == 0) return bot();
  return big_or(std::vector<Formula>(k, one));
}

inline Formula chi_k(std::size_t k, const Signature& sig, Dialect dialect = Dialect::COD) {
  return chi_from(chi_one(sig, dialect), k);
}

inline Formula chi_k_star(std::size_t k, const Signature& sig, Dialect dialect = Dialect::COD) {
  return chi_from(chi_one_star(sig, dialect), k);
}

namespace detail {

inline Formula xi_with(const CausalTeam& t, const Universe& u, const Formula& chi_one_f) {
  if (t.empty()) throw Error("characteristic formula of an empty team component");
  std::set<Assignment> in(t.rows().begin(), t.rows().end());
  std::vector<Assignment> rest;
  for (const auto& s : u.assignments)
    if (!in.count(s)) rest.push_back(s);
  std::size_t g0 = u.class_index(t.fc());
  std::vector<Formula> others;
  for (std::size_t r = 0; r < u.rep_count(); ++r)
    if (r != g0) others.push_back(phi_F(u.rep(r)));
  Formula head = disj(chi_from(chi_one_f, t.size() - 1), theta_T(*u.sig, rest));
  return disj(head, big_or(others));
}

}  // namespace detail

// Satisfied by S iff no R ~ T (same rows, similar fc) is a causal subteam of S.
inline Formula xi_T(const CausalTeam& t, const Universe& u, Dialect dialect = Dialect::COD) {
  return detail::xi_with(t, u, chi_one(*u.sig, dialect));
}

inline Formula xi_star(const CausalTeam& t, const Universe& u, Dialect dialect = Dialect::COD) {
  return detail::xi_with(t, u, chi_one_star(*u.sig, dialect));
}

// Generalized form for a set of members possibly spread over several
// ~-classes: satisfied by a gct iff it does not contain, up to ~ of function
// components, every member of ms.
inline Formula xi_star_members(const std::vector<Member>& ms, const Universe& u,
                               Dialect dialect = Dialect::COD) {
  if (ms.empty()) throw Error("characteristic formula of an empty team component");
  std::set<std::pair<std::size_t, Assignment>> points;
  for (const auto& m : ms) points.insert({u.class_index(m.fc), m.assignment});
  std::vector<Formula> parts;
  for (std::size_t r = 0; r < u.rep_count(); ++r) {
    std::vector<Assignment> rest;
    for (const auto& s : u.assignments)
      if (!points.count({r, s})) rest.push_back(s);
    Formula phi = phi_F(u.rep(r));
    parts.push_back(rest.size() == u.assignments.size() ? phi : conj(theta_T(*u.sig, rest), phi));
  }
  return disj(chi_k_star(points.size() - 1, *u.sig, dialect), big_or(parts));
}

inline Formula unf(const Universe& u) {
  std::vector<Formula> ds;
  for (const auto& f : u.fcs) ds.push_back(phi_F(f));
  return big_idisj(ds);
}

inline Formula beta_dc(const Signature& sig, VarId x, VarId v) {
  if (x == v) throw Error("direct-cause formula needs two distinct variables");
  auto z = detail::domain_minus(sig, {x, v});
  std::vector<Formula> ds;
  for (const auto& zv : detail::valuations(sig, z))
    for (std::size_t a = 0; a < sig.range_size(x); ++a)
      for (std::size_t a2 = 0; a2 < sig.range_size(x); ++a2) {
        if (a == a2) continue;
        for (std::size_t b = 0; b < sig.range_size(v); ++b)
          for (std::size_t b2 = 0; b2 < sig.range_size(v); ++b2) {
            if (b == b2) continue;
            auto ant1 = detail::concat(zv, {{x, static_cast<ValId>(a)}});
            auto ant2 = detail::concat(zv, {{x, static_cast<ValId>(a2)}});
            ds.push_back(conj(cf(ant1, eq(v, static_cast<ValId>(b))),
                              cf(ant2, eq(v, static_cast<ValId>(b2)))));
          }
      }
  return big_or(ds);
}

inline Formula beta_en(const Signature& sig, VarId v) {
  std::vector<Formula> ds;
  for (auto x : detail::domain_minus(sig, {v})) ds.push_back(beta_dc(sig, x, v));
  return big_or(ds);
}

inline Formula one_fun(const Signature& sig) {
  std::vector<Formula> cs;
  for (std::size_t v = 0; v < sig.size(); ++v) {
    auto x = static_cast<VarId>(v);
    auto w = detail::domain_minus(sig, {x});
    std::vector<Formula> parts;
    if (w.empty()) parts.push_back(con(x));
    else
      for (const auto& wv : detail::valuations(sig, w)) parts.push_back(cf(wv, con(x)));
    cs.push_back(selimp(beta_en(sig, x), big_and(parts)));
  }
  return big_and(cs);
}

inline Formula no_mix(const Universe& u) {
  ModelChecker mc(u.sig);
  std::vector<Formula> cs;
  for (std::size_t v = 0; v < u.sig->size(); ++v) {
    Formula be = beta_en(*u.sig, static_cast<VarId>(v));
    std::vector<const Member*> yes, no;
    for (const auto& m : u.sem) (mc.check_member(m, be) ? yes : no).push_back(&m);
    for (const auto* a : yes)
      for (const auto* b : no) cs.push_back(xi_star_members({*a, *b}, u));
  }
  return big_and(cs);
}

// X causally affects Y under some fixing of a set of other variables.
inline Formula leadsto(const Signature& sig, VarId x, VarId y) {
  if (x == y) throw Error("causal-influence formula needs two distinct variables");
  auto rest = detail::domain_minus(sig, {x, y});
  std::vector<Formula> ds;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rest.size()); ++mask) {
    std::vector<VarId> z;
    for (std::size_t i = 0; i < rest.size(); ++i)
      if (mask >> i & 1) z.push_back(rest[i]);
    for (const auto& zv : detail::valuations(sig, z))
      for (std::size_t a = 0; a < sig.range_size(x); ++a)
        for (std::size_t a2 = 0; a2 < sig.range_size(x); ++a2) {
          if (a == a2) continue;
          for (std::size_t b = 0; b < sig.range_size(y); ++b)
            for (std::size_t b2 = 0; b2 < sig.range_size(y); ++b2) {
              if (b == b2) continue;
              Formula inner = conj(cf({{x, static_cast<ValId>(a)}}, eq(y, static_cast<ValId>(b))),
                                   cf({{x, static_cast<ValId>(a2)}}, eq(y, static_cast<ValId>(b2))));
              ds.push_back(z.empty() ? inner : cf(zv, inner));
            }
        }
  }
  return big_or(ds);
}

// ---------------------------------------------------------------------------
// Classes of causal teams.

class DefinabilityError : public Error {
 public:
  DefinabilityError(const std::string& msg, CausalTeam witness)
      : Error(msg), witness_(std::move(witness)) {}
  const CausalTeam& witness() const { return witness_; }

 private:
  CausalTeam witness_;
};

struct TeamClass {
  SignaturePtr sig;
  std::set<CausalTeam> members;

  bool contains(const CausalTeam& t) const { return members.count(t) > 0; }
};

inline std::vector<CausalTeam> all_causal_teams(const Universe& u) {
  std::vector<CausalTeam> out;
  for (std::size_t i = 0; i < u.fcs.size(); ++i) {
    const auto& rows = u.compatible[i];
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << rows.size()); ++m)
      out.emplace_back(u.fcs[i], detail::pick_bits(rows, m));
  }
  return out;
}

// Teams (T-, G) with G ~ T's fc, compatible with T-.
inline std::vector<CausalTeam> equivalents(const CausalTeam& t, const Universe& u) {
  std::vector<CausalTeam> out;
  for (const auto& g : u.fcs) {
    if (!fc_similar(g, t.fc())) continue;
    bool ok = true;
    for (const auto& r : t.rows()) ok = ok && compatible(r, g);
    if (ok) out.emplace_back(g, t.rows());
  }
  return out;
}

namespace detail {

inline void require_nonempty(const TeamClass& k) {
  if (k.members.empty()) throw Error("class is empty");
}

inline void require_equivalence_closed(const TeamClass& k, const Universe& u) {
  for (const auto& t : k.members)
    for (const auto& r : equivalents(t, u))
      if (!k.contains(r)) throw DefinabilityError("class is not closed under causal equivalence", r);
}

}  // namespace detail

// Flat: (T-, F) in K iff ({s}, F) in K for all s in T-. The result is a CO
// formula with K_phi = K.
inline Formula define_flat_class(const TeamClass& k, const Universe& u) {
  detail::require_nonempty(k);
  detail::require_equivalence_closed(k, u);
  for (const auto& t : all_causal_teams(u)) {
    bool singles = true;
    for (const auto& s : t.rows()) singles = singles && k.contains(CausalTeam(t.fc(), {s}));
    if (singles != k.contains(t))
      throw DefinabilityError(singles ? "class is not flat: team missing although all its singletons belong"
                                      : "class is not flat: team included although a singleton is missing",
                              t);
  }
  std::vector<std::vector<Assignment>> rows(u.rep_count());
  for (const auto& t : k.members) {
    auto& r = rows[u.class_index(t.fc())];
    r.insert(r.end(), t.rows().begin(), t.rows().end());
  }
  std::vector<Formula> ds;
  for (std::size_t r = 0; r < u.rep_count(); ++r) ds.push_back(conj(theta_T(*u.sig, rows[r]), phi_F(u.rep(r))));
  return big_or(ds);
}

// Downward closed and closed under equivalence, containing every team with an
// empty team component (all formulas hold there). Result is a COD formula
// (or COi under that dialect) with K_phi = K.
inline Formula define_downward_class(const TeamClass& k, const Universe& u,
                                     Dialect dialect = Dialect::COD) {
  detail::require_nonempty(k);
  detail::require_equivalence_closed(k, u);
  for (const auto& f : u.fcs) {
    CausalTeam e(f, {});
    if (!k.contains(e))
      throw DefinabilityError("class lacks a team with empty team component; no formula defines it", e);
  }
  for (const auto& t : k.members)
    for (std::size_t i = 0; i < t.size(); ++i) {
      auto rows = t.rows();
      rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(i));
      CausalTeam sub(t.fc(), rows);
      if (!k.contains(sub)) throw DefinabilityError("class is not causally downward closed", sub);
    }
  std::vector<Formula> cs;
  for (const auto& t : all_causal_teams(u))
    if (!k.contains(t)) cs.push_back(xi_T(t, u, dialect));
  return big_and(cs);
}

// Smallest flat, equivalence-closed class containing the given teams.
inline TeamClass close_flat(const std::vector<CausalTeam>& seed, const Universe& u) {
  std::set<std::pair<std::size_t, Assignment>> points;
  for (const auto& t : seed)
    for (const auto& s : t.rows()) points.insert({u.class_index(t.fc()), s});
  TeamClass k{u.sig, {}};
  for (const auto& t : all_causal_teams(u)) {
    std::size_t c = u.class_index(t.fc());
    bool ok = true;
    for (const auto& s : t.rows()) ok = ok && points.count({c, s});
    if (ok) k.members.insert(t);
  }
  return k;
}

// Smallest downward-closed, equivalence-closed class containing the given
// teams and every empty-component team.
inline TeamClass close_downward(const std::vector<CausalTeam>& seed, const Universe& u) {
  TeamClass k{u.sig, {}};
  for (const auto& t : all_causal_teams(u)) {
    bool ok = t.empty();
    for (const auto& r : seed) {
      if (ok) break;
      if (!fc_similar(r.fc(), t.fc())) continue;
      ok = std::includes(r.rows().begin(), r.rows().end(), t.rows().begin(), t.rows().end());
    }
    if (ok) k.members.insert(t);
  }
  return k;
}

// K_phi restricted to the enumerated causal teams.
inline TeamClass defined_class(const Formula& f, const Universe& u) {
  ModelChecker mc(u.sig);
  TeamClass k{u.sig, {}};
  for (const auto& t : all_causal_teams(u))
    if (mc.check(t, f)) k.members.insert(t);
  return k;
}

}  // namespace cteam
