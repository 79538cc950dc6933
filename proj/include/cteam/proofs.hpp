#pragma once

#include <array>
#include <optional>

#include "cteam/charform.hpp"

namespace cteam {

enum class RuleId {
  Hyp,
  ValDef, ValUnq, AndI, AndE_L, AndE_R, OrI_L, OrI_R, OrE, NegI, NegE, RAA,
  CfEff, CfCmp, CfBotE, BotCfE, CfCtr, CfWk, CfSub, CfAndI, CfOrDst_fwd, CfOrDst_bwd,
  CfExtr, CfExp, NegCfE, Recur,
  OrCom, OrAss, OrSub, IDisjI_L, IDisjI_R, IDisjE, OrIDisjDst, CfIDisjDst, Unf,
  DepI0, DepI, Dep0E, DepE, OneFun, NoMix,
};

inline constexpr std::array<std::pair<RuleId, const char*>, 41> kRuleNames{{
    {RuleId::Hyp, "Hyp"},           {RuleId::ValDef, "ValDef"},       {RuleId::ValUnq, "ValUnq"},
    {RuleId::AndI, "AndI"},         {RuleId::AndE_L, "AndE_L"},       {RuleId::AndE_R, "AndE_R"},
    {RuleId::OrI_L, "OrI_L"},       {RuleId::OrI_R, "OrI_R"},         {RuleId::OrE, "OrE"},
    {RuleId::NegI, "NegI"},         {RuleId::NegE, "NegE"},           {RuleId::RAA, "RAA"},
    {RuleId::CfEff, "CfEff"},       {RuleId::CfCmp, "CfCmp"},         {RuleId::CfBotE, "CfBotE"},
    {RuleId::BotCfE, "BotCfE"},     {RuleId::CfCtr, "CfCtr"},         {RuleId::CfWk, "CfWk"},
    {RuleId::CfSub, "CfSub"},       {RuleId::CfAndI, "CfAndI"},       {RuleId::CfOrDst_fwd, "CfOrDst_fwd"},
    {RuleId::CfOrDst_bwd, "CfOrDst_bwd"}, {RuleId::CfExtr, "CfExtr"}, {RuleId::CfExp, "CfExp"},
    {RuleId::NegCfE, "NegCfE"},     {RuleId::Recur, "Recur"},         {RuleId::OrCom, "OrCom"},
    {RuleId::OrAss, "OrAss"},       {RuleId::OrSub, "OrSub"},         {RuleId::IDisjI_L, "IDisjI_L"},
    {RuleId::IDisjI_R, "IDisjI_R"}, {RuleId::IDisjE, "IDisjE"},       {RuleId::OrIDisjDst, "OrIDisjDst"},
    {RuleId::CfIDisjDst, "CfIDisjDst"}, {RuleId::Unf, "Unf"},         {RuleId::DepI0, "DepI0"},
    {RuleId::DepI, "DepI"},         {RuleId::Dep0E, "Dep0E"},         {RuleId::DepE, "DepE"},
    {RuleId::OneFun, "OneFun"},     {RuleId::NoMix, "NoMix"},
}};

inline const char* rule_name(RuleId r) {
  for (const auto& [id, name] : kRuleNames)
    if (id == r) return name;
  return "?";
}

inline std::optional<RuleId> rule_from_name(std::string_view s) {
  for (const auto& [id, name] : kRuleNames)
    if (s == name) return id;
  return std::nullopt;
}

enum class Calculus { CO, COi_gct, COi_ct, COD_gct, COD_ct };

inline constexpr std::array<Calculus, 5> kCalculi{Calculus::CO, Calculus::COi_gct, Calculus::COi_ct,
                                                  Calculus::COD_gct, Calculus::COD_ct};

inline const char* calculus_name(Calculus c) {
  switch (c) {
    case Calculus::CO: return "co";
    case Calculus::COi_gct: return "coi-gct";
    case Calculus::COi_ct: return "coi-ct";
    case Calculus::COD_gct: return "cod-gct";
    case Calculus::COD_ct: return "cod-ct";
  }
  return "?";
}

inline std::optional<Calculus> calculus_from_name(std::string_view s) {
  for (auto c : kCalculi)
    if (s == calculus_name(c)) return c;
  return std::nullopt;
}

inline Dialect calculus_dialect(Calculus c) {
  switch (c) {
    case Calculus::CO: return Dialect::CO;
    case Calculus::COi_gct:
    case Calculus::COi_ct: return Dialect::COi;
    default: return Dialect::COD;
  }
}

inline bool ct_calculus(Calculus c) { return c == Calculus::COi_ct || c == Calculus::COD_ct; }

inline bool rule_in_calculus(RuleId r, Calculus c) {
  bool coi = c == Calculus::COi_gct || c == Calculus::COi_ct;
  bool cod = c == Calculus::COD_gct || c == Calculus::COD_ct;
  switch (r) {
    case RuleId::OrCom:
    case RuleId::OrAss:
    case RuleId::OrSub:
      return coi || cod;
    case RuleId::IDisjI_L:
    case RuleId::IDisjI_R:
    case RuleId::IDisjE:
    case RuleId::OrIDisjDst:
    case RuleId::CfIDisjDst:
      return coi;
    case RuleId::Unf:
      return c == Calculus::COi_ct;
    case RuleId::DepI0:
    case RuleId::DepI:
    case RuleId::Dep0E:
    case RuleId::DepE:
      return cod;
    case RuleId::OneFun:
    case RuleId::NoMix:
      return c == Calculus::COD_ct;
    default:
      return true;
  }
}

inline std::vector<RuleId> calculus_rules(Calculus c) {
  std::vector<RuleId> out;
  for (std::size_t i = 1; i < kRuleNames.size(); ++i)
    if (rule_in_calculus(kRuleNames[i].first, c)) out.push_back(kRuleNames[i].first);
  return out;
}

struct SideData {
  Path path;                 // Dep0E: occurrence of the constancy atom in the major premise
  std::vector<VarId> chain;  // Recur: X1 ... Xk
};

// One sequent of a derivation: hypotheses |- conclusion, justified by a rule
// applied to earlier nodes (referenced by label).
struct ProofNode {
  std::size_t label = 0;
  std::vector<Formula> hyps;
  Formula concl;
  RuleId rule = RuleId::Hyp;
  std::vector<std::size_t> premises;
  SideData side;
};

struct Derivation {
  std::vector<Formula> assumptions;
  std::vector<ProofNode> nodes;
};

struct CheckResult {
  bool ok = true;
  std::size_t node = 0;  // label of the offending node
  std::string reason;
};

namespace detail {

inline bool contains(const std::vector<Formula>& xs, const Formula& f) {
  for (const auto& x : xs)
    if (same(x, f)) return true;
  return false;
}

inline std::vector<Formula> set_union(std::vector<Formula> a, const std::vector<Formula>& b) {
  for (const auto& f : b)
    if (!contains(a, f)) a.push_back(f);
  return a;
}

inline std::vector<Formula> set_minus(const std::vector<Formula>& a, const std::vector<Formula>& drop) {
  std::vector<Formula> out;
  for (const auto& f : a)
    if (!contains(drop, f) && !contains(out, f)) out.push_back(f);
  return out;
}

inline bool set_equal(const std::vector<Formula>& a, const std::vector<Formula>& b) {
  for (const auto& f : a)
    if (!contains(b, f)) return false;
  for (const auto& f : b)
    if (!contains(a, f)) return false;
  return true;
}

inline EquationSeq sorted(EquationSeq a) {
  std::sort(a.begin(), a.end());
  return a;
}

inline bool ms_equal(const EquationSeq& a, const EquationSeq& b) { return sorted(a) == sorted(b); }

inline bool is(const Formula& f, Kind k) { return f && f->kind == k; }

}  // namespace detail

// Per-signature data the rules need: axiom formulas (built on first use).
class ProofContext {
 public:
  ProofContext(SignaturePtr sig, Calculus calc) : sig_(std::move(sig)), calc_(calc) {}

  const SignaturePtr& sig() const { return sig_; }
  Calculus calculus() const { return calc_; }

  const Universe& universe() {
    if (!u_) u_ = build_universe(sig_);
    return *u_;
  }
  const Formula& unf_axiom() {
    if (!unf_) unf_ = unf(universe());
    return *unf_;
  }
  const Formula& one_fun_axiom() {
    if (!one_fun_) one_fun_ = one_fun(*sig_);
    return *one_fun_;
  }
  const Formula& no_mix_axiom() {
    if (!no_mix_) no_mix_ = no_mix(universe());
    return *no_mix_;
  }

 private:
  SignaturePtr sig_;
  Calculus calc_;
  std::optional<Universe> u_;
  std::optional<Formula> unf_, one_fun_, no_mix_;
};

// Local checks of one rule application. prem are the premise nodes in order.
// Returns the hypotheses the conclusion must carry, or an error message.
struct StepOutcome {
  std::optional<std::vector<Formula>> hyps;
  std::string error;
};

inline StepOutcome check_step(ProofContext& ctx, RuleId rule, const std::vector<const ProofNode*>& prem,
                              const ProofNode& node) {
  using detail::is;
  const Signature& sig = *ctx.sig();
  const Formula& c = node.concl;
  auto fail = [](std::string m) { return StepOutcome{std::nullopt, std::move(m)}; };
  auto P = [&](std::size_t i) -> const Formula& { return prem[i]->concl; };
  auto arity = [&](std::size_t n) { return prem.size() == n; };
  std::vector<Formula> all;
  for (const auto* p : prem) all = detail::set_union(all, p->hyps);
  auto ok = [&](std::vector<Formula> h) { return StepOutcome{std::move(h), {}}; };

  switch (rule) {
    case RuleId::Hyp:
      if (!arity(0)) return fail("Hyp takes no premises");
      return ok({c});

    case RuleId::ValDef: {
      if (!arity(0)) return fail("ValDef takes no premises");
      for (std::size_t v = 0; v < sig.size(); ++v) {
        std::vector<Formula> ds;
        for (std::size_t x = 0; x < sig.range_size(static_cast<VarId>(v)); ++x)
          ds.push_back(eq(static_cast<VarId>(v), static_cast<ValId>(x)));
        if (same(big_or(ds), c)) return ok({});
      }
      return fail("conclusion is not the disjunction of all values of a variable");
    }
    case RuleId::ValUnq:
      if (!arity(1)) return fail("ValUnq takes one premise");
      if (!is(P(0), Kind::Eq)) return fail("premise is not an equation");
      if (!is(c, Kind::Neg) || !is(c->a, Kind::Eq) || c->a->var != P(0)->var || c->a->val == P(0)->val)
        return fail("conclusion is not X!=x' for another value x'");
      return ok(all);

    case RuleId::AndI:
      if (!arity(2)) return fail("AndI takes two premises");
      if (!is(c, Kind::And) || !same(c->a, P(0)) || !same(c->b, P(1)))
        return fail("conclusion is not the conjunction of the premises");
      return ok(all);
    case RuleId::AndE_L:
    case RuleId::AndE_R: {
      if (!arity(1)) return fail("AndE takes one premise");
      if (!is(P(0), Kind::And)) return fail("premise is not a conjunction");
      const Formula& part = rule == RuleId::AndE_L ? P(0)->a : P(0)->b;
      if (!same(part, c)) return fail("conclusion is not the selected conjunct");
      return ok(all);
    }
    case RuleId::OrI_L:
    case RuleId::OrI_R: {
      if (!arity(1)) return fail("OrI takes one premise");
      if (!is(c, Kind::Or)) return fail("conclusion is not a disjunction");
      const Formula& part = rule == RuleId::OrI_L ? c->a : c->b;
      if (!same(part, P(0))) return fail("premise is not the selected disjunct");
      return ok(all);
    }
    case RuleId::OrE:
    case RuleId::IDisjE: {
      Kind k = rule == RuleId::OrE ? Kind::Or : Kind::IntDisj;
      if (!arity(3)) return fail("elimination takes three premises");
      if (!is(P(0), k)) return fail("major premise has the wrong main connective");
      if (!same(P(1), c) || !same(P(2), c)) return fail("minor premises do not both derive the conclusion");
      if (rule == RuleId::OrE && !is_co(c)) return fail("conclusion of OrE must be a CO formula");
      auto h = detail::set_union(prem[0]->hyps, detail::set_minus(prem[1]->hyps, {P(0)->a}));
      return ok(detail::set_union(h, detail::set_minus(prem[2]->hyps, {P(0)->b})));
    }
    case RuleId::NegI:
      if (!arity(1)) return fail("NegI takes one premise");
      if (!is_falsum(P(0))) return fail("premise is not falsum");
      if (!is(c, Kind::Neg)) return fail("conclusion is not a negation");
      return ok(detail::set_minus(prem[0]->hyps, {c->a}));
    case RuleId::NegE:
      if (!arity(2)) return fail("NegE takes two premises");
      if (!is(P(1), Kind::Neg) || !same(P(1)->a, P(0))) return fail("second premise is not the negation of the first");
      return ok(all);
    case RuleId::RAA:
      if (!arity(1)) return fail("RAA takes one premise");
      if (!is_falsum(P(0))) return fail("premise is not falsum");
      if (!is_co(c)) return fail("conclusion of RAA must be a CO formula");
      return ok(detail::set_minus(prem[0]->hyps, {neg(c)}));

    case RuleId::CfEff: {
      if (!arity(0)) return fail("CfEff takes no premises");
      if (!is(c, Kind::Cf) || !is(c->a, Kind::Eq)) return fail("conclusion is not a counterfactual with an equation consequent");
      Equation e{c->a->var, c->a->val};
      if (std::find(c->antecedent.begin(), c->antecedent.end(), e) == c->antecedent.end())
        return fail("consequent equation does not occur in the antecedent");
      return ok({});
    }
    case RuleId::CfCmp: {
      if (!arity(2)) return fail("CfCmp takes two premises");
      if (!is(P(0), Kind::Cf) || !is(P(0)->a, Kind::Eq)) return fail("first premise is not X=x -> W=w");
      if (!is(P(1), Kind::Cf) || !detail::ms_equal(P(0)->antecedent, P(1)->antecedent))
        return fail("premises have different antecedents");
      if (P(1)->a->has_cf) return fail("composed consequent must be free of counterfactuals");
      auto want = P(0)->antecedent;
      want.push_back({P(0)->a->var, P(0)->a->val});
      if (!is(c, Kind::Cf) || !detail::ms_equal(c->antecedent, want) || !same(c->a, P(1)->a))
        return fail("conclusion is not (X=x /\\ W=w) -> gamma");
      return ok(all);
    }
    case RuleId::CfBotE:
      if (!arity(1)) return fail("CfBotE takes one premise");
      if (!is(P(0), Kind::Cf) || !is_falsum(P(0)->a)) return fail("premise is not X=x -> falsum");
      if (!eq_consistent(P(0)->antecedent)) return fail("antecedent must be consistent");
      return ok(all);
    case RuleId::BotCfE:
      if (!arity(0)) return fail("BotCfE takes no premises");
      if (!is(c, Kind::Cf) || eq_consistent(c->antecedent)) return fail("conclusion needs an inconsistent antecedent");
      return ok({});
    case RuleId::CfCtr:
    case RuleId::CfWk: {
      if (!arity(1)) return fail("rule takes one premise");
      if (!is(P(0), Kind::Cf) || !is(c, Kind::Cf) || !same(P(0)->a, c->a))
        return fail("premise and conclusion must be counterfactuals with the same consequent");
      const auto& longer = rule == RuleId::CfCtr ? P(0)->antecedent : c->antecedent;
      const auto& shorter = rule == RuleId::CfCtr ? c->antecedent : P(0)->antecedent;
      bool good = false;
      for (const auto& e : shorter) {
        auto t = shorter;
        t.push_back(e);
        if (detail::ms_equal(t, longer)) good = true;
      }
      if (!good) return fail("antecedents do not differ by one duplicated equation");
      return ok(all);
    }
    case RuleId::CfSub:
      if (!arity(2)) return fail("CfSub takes two premises");
      if (!is(P(0), Kind::Cf)) return fail("first premise is not a counterfactual");
      if (!detail::set_minus(prem[1]->hyps, {P(0)->a}).empty())
        return fail("subderivation may only use the consequent of the first premise");
      if (!is(c, Kind::Cf) || !detail::ms_equal(c->antecedent, P(0)->antecedent) || !same(c->a, P(1)))
        return fail("conclusion is not X=x -> psi");
      return ok(prem[0]->hyps);
    case RuleId::CfAndI:
      if (!arity(2)) return fail("CfAndI takes two premises");
      if (!is(P(0), Kind::Cf) || !is(P(1), Kind::Cf) || !detail::ms_equal(P(0)->antecedent, P(1)->antecedent))
        return fail("premises are not counterfactuals with one antecedent");
      if (!is(c, Kind::Cf) || !detail::ms_equal(c->antecedent, P(0)->antecedent) || !is(c->a, Kind::And) ||
          !same(c->a->a, P(0)->a) || !same(c->a->b, P(1)->a))
        return fail("conclusion is not X=x -> (phi /\\ psi)");
      return ok(all);
    case RuleId::CfOrDst_fwd:
    case RuleId::CfOrDst_bwd:
    case RuleId::CfIDisjDst: {
      if (!arity(1)) return fail("distribution takes one premise");
      Kind inner = rule == RuleId::CfIDisjDst ? Kind::IntDisj : Kind::Or;
      const Formula& packed = rule == RuleId::CfOrDst_bwd ? c : P(0);
      const Formula& spread = rule == RuleId::CfOrDst_bwd ? P(0) : c;
      if (!is(packed, Kind::Cf) || !is(packed->a, inner)) return fail("counterfactual side has the wrong shape");
      if (!is(spread, inner) || !is(spread->a, Kind::Cf) || !is(spread->b, Kind::Cf) ||
          !detail::ms_equal(spread->a->antecedent, packed->antecedent) ||
          !detail::ms_equal(spread->b->antecedent, packed->antecedent) || !same(spread->a->a, packed->a->a) ||
          !same(spread->b->a, packed->a->b))
        return fail("distributed side does not match");
      return ok(all);
    }
    case RuleId::CfExtr: {
      if (!arity(1)) return fail("CfExtr takes one premise");
      if (!is(P(0), Kind::Cf) || !is(P(0)->a, Kind::Cf)) return fail("premise is not X=x -> (Y=y -> phi)");
      if (!eq_consistent(P(0)->antecedent)) return fail("outer antecedent must be consistent");
      const auto& y = P(0)->a->antecedent;
      auto yv = eq_vars(y);
      EquationSeq want;
      for (const auto& e : P(0)->antecedent)
        if (!std::binary_search(yv.begin(), yv.end(), e.var)) want.push_back(e);
      want.insert(want.end(), y.begin(), y.end());
      if (!is(c, Kind::Cf) || !detail::ms_equal(c->antecedent, want) || !same(c->a, P(0)->a->a))
        return fail("conclusion is not (X'=x' /\\ Y=y) -> phi");
      return ok(all);
    }
    case RuleId::CfExp: {
      if (!arity(1)) return fail("CfExp takes one premise");
      if (!is(P(0), Kind::Cf) || !is(c, Kind::Cf) || !is(c->a, Kind::Cf)) return fail("wrong shapes");
      auto xv = eq_vars(c->antecedent), yv = eq_vars(c->a->antecedent);
      for (auto v : xv)
        if (std::binary_search(yv.begin(), yv.end(), v)) return fail("antecedents share a variable");
      auto joined = detail::concat(c->antecedent, c->a->antecedent);
      if (!detail::ms_equal(joined, P(0)->antecedent) || !same(c->a->a, P(0)->a))
        return fail("conclusion does not split the premise antecedent");
      return ok(all);
    }
    case RuleId::NegCfE:
      if (!arity(1)) return fail("NegCfE takes one premise");
      if (!is(P(0), Kind::Neg) || !is(P(0)->a, Kind::Cf)) return fail("premise is not ~(X=x -> alpha)");
      if (!is(c, Kind::Cf) || !detail::ms_equal(c->antecedent, P(0)->a->antecedent) || !is(c->a, Kind::Neg) ||
          !same(c->a->a, P(0)->a->a))
        return fail("conclusion is not X=x -> ~alpha");
      return ok(all);
    case RuleId::Recur: {
      const auto& ch = node.side.chain;
      if (ch.size() < 2) return fail("Recur needs a chain of at least two variables");
      for (std::size_t i = 0; i < ch.size(); ++i) {
        if (ch[i] >= sig.size()) return fail("chain variable outside the signature");
        for (std::size_t j = i + 1; j < ch.size(); ++j)
          if (ch[i] == ch[j]) return fail("chain variables must be pairwise distinct");
      }
      if (!arity(ch.size() - 1)) return fail("Recur needs one premise per chain link");
      for (std::size_t i = 0; i + 1 < ch.size(); ++i)
        if (!same(P(i), leadsto(sig, ch[i], ch[i + 1])))
          return fail("premise " + std::to_string(i + 1) + " is not the causal-influence formula of its link");
      if (!same(c, neg(leadsto(sig, ch.back(), ch.front()))))
        return fail("conclusion is not the negated influence of the last variable on the first");
      return ok(all);
    }
    case RuleId::OrCom:
      if (!arity(1)) return fail("OrCom takes one premise");
      if (!is(P(0), Kind::Or) || !is(c, Kind::Or) || !same(c->a, P(0)->b) || !same(c->b, P(0)->a))
        return fail("conclusion is not the commuted disjunction");
      return ok(all);
    case RuleId::OrAss:
      if (!arity(1)) return fail("OrAss takes one premise");
      if (!is(P(0), Kind::Or) || !is(P(0)->a, Kind::Or) || !is(c, Kind::Or) || !is(c->b, Kind::Or) ||
          !same(c->a, P(0)->a->a) || !same(c->b->a, P(0)->a->b) || !same(c->b->b, P(0)->b))
        return fail("conclusion is not the reassociated disjunction");
      return ok(all);
    case RuleId::OrSub:
      if (!arity(2)) return fail("OrSub takes two premises");
      if (!is(P(0), Kind::Or)) return fail("first premise is not a disjunction");
      if (!is(c, Kind::Or) || !same(c->a, P(1)) || !same(c->b, P(0)->b))
        return fail("conclusion is not chi \\/ psi");
      return ok(detail::set_union(prem[0]->hyps, detail::set_minus(prem[1]->hyps, {P(0)->a})));
    case RuleId::IDisjI_L:
    case RuleId::IDisjI_R: {
      if (!arity(1)) return fail("introduction takes one premise");
      if (!is(c, Kind::IntDisj)) return fail("conclusion is not an intuitionistic disjunction");
      const Formula& part = rule == RuleId::IDisjI_L ? c->a : c->b;
      if (!same(part, P(0))) return fail("premise is not the selected disjunct");
      return ok(all);
    }
    case RuleId::OrIDisjDst:
      if (!arity(1)) return fail("OrIDisjDst takes one premise");
      if (!is(P(0), Kind::Or) || !is(P(0)->b, Kind::IntDisj)) return fail("premise is not phi \\/ (psi \\\\/ chi)");
      if (!same(c, idisj(disj(P(0)->a, P(0)->b->a), disj(P(0)->a, P(0)->b->b))))
        return fail("conclusion is not (phi \\/ psi) \\\\/ (phi \\/ chi)");
      return ok(all);
    case RuleId::Unf:
      if (!arity(0)) return fail("Unf takes no premises");
      if (!same(c, ctx.unf_axiom())) return fail("conclusion is not the uniformity axiom of the signature");
      return ok({});
    case RuleId::OneFun:
      if (!arity(0)) return fail("OneFun takes no premises");
      if (!same(c, ctx.one_fun_axiom())) return fail("conclusion is not the unique-function axiom of the signature");
      return ok({});
    case RuleId::NoMix:
      if (!arity(0)) return fail("NoMix takes no premises");
      if (!same(c, ctx.no_mix_axiom())) return fail("conclusion is not the no-mixing axiom of the signature");
      return ok({});
    case RuleId::DepI0:
      if (!arity(1)) return fail("DepI0 takes one premise");
      if (!is(P(0), Kind::Eq) || !same(c, con(P(0)->var))) return fail("conclusion is not =(X) for the premise X=x");
      return ok(all);
    case RuleId::DepI: {
      if (!arity(1)) return fail("DepI takes one premise");
      if (!is(c, Kind::Dep) || c->dep_vars.empty()) return fail("conclusion is not =(X1,...,Xn;Y)");
      if (!same(P(0), con(c->var))) return fail("premise is not =(Y)");
      std::vector<Formula> drop;
      for (auto x : c->dep_vars) drop.push_back(con(x));
      return ok(detail::set_minus(prem[0]->hyps, drop));
    }
    case RuleId::DepE: {
      if (prem.empty() || !is(P(0), Kind::Dep) || P(0)->dep_vars.empty())
        return fail("first premise is not =(X1,...,Xn;Y)");
      const auto& xs = P(0)->dep_vars;
      if (!arity(xs.size() + 1)) return fail("DepE needs one constancy premise per determiner");
      for (std::size_t i = 0; i < xs.size(); ++i)
        if (!same(P(i + 1), con(xs[i]))) return fail("premise " + std::to_string(i + 2) + " is not =(X" + std::to_string(i + 1) + ")");
      if (!same(c, con(P(0)->var))) return fail("conclusion is not =(Y)");
      return ok(all);
    }
    case RuleId::Dep0E: {
      if (prem.empty()) return fail("Dep0E needs a major premise");
      const Formula* occ = nullptr;
      try {
        occ = &subformula(P(0), node.side.path);
      } catch (const Error&) {
        return fail("occurrence path leaves the major premise");
      }
      if (!is(*occ, Kind::Dep) || !(*occ)->dep_vars.empty()) return fail("path does not point at a constancy atom");
      VarId x = (*occ)->var;
      if (!arity(1 + sig.range_size(x))) return fail("Dep0E needs one minor premise per value");
      auto h = prem[0]->hyps;
      for (std::size_t i = 0; i < sig.range_size(x); ++i) {
        if (!same(P(i + 1), c)) return fail("minor premise " + std::to_string(i + 1) + " does not derive the conclusion");
        Formula replaced = replace_at(P(0), node.side.path, eq(x, static_cast<ValId>(i)));
        h = detail::set_union(h, detail::set_minus(prem[i + 1]->hyps, {replaced}));
      }
      return ok(h);
    }
  }
  return fail("unknown rule");
}

inline CheckResult check(const Derivation& d, Calculus calc, const SignaturePtr& sig) {
  ProofContext ctx(sig, calc);
  Dialect dialect = calculus_dialect(calc);
  std::map<std::size_t, std::size_t> pos;  // label -> index
  auto bad = [](std::size_t label, std::string why) { return CheckResult{false, label, std::move(why)}; };
  auto well_formed = [&](const Formula& f) -> std::optional<std::string> {
    try {
      check_signature(f, *sig);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    auto c = classify(f);
    if (c.dialect == Dialect::IllFormed) return "ill-formed formula: " + c.reason;
    if (!in_language(f, dialect))
      return std::string("formula outside the language of calculus ") + calculus_name(calc);
    return std::nullopt;
  };
  for (const auto& a : d.assumptions)
    if (auto w = well_formed(a)) return bad(0, "assumption: " + *w);
  if (d.nodes.empty()) return bad(0, "derivation has no nodes");
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    const auto& n = d.nodes[i];
    if (pos.count(n.label)) return bad(n.label, "duplicate node label");
    if (!rule_in_calculus(n.rule, calc))
      return bad(n.label, std::string("rule ") + rule_name(n.rule) + " is not part of calculus " + calculus_name(calc));
    if (!n.concl) return bad(n.label, "missing conclusion");
    if (auto w = well_formed(n.concl)) return bad(n.label, "conclusion: " + *w);
    for (const auto& h : n.hyps)
      if (auto w = well_formed(h)) return bad(n.label, "hypothesis: " + *w);
    std::vector<const ProofNode*> prem;
    for (auto p : n.premises) {
      auto it = pos.find(p);
      if (it == pos.end()) return bad(n.label, "premise " + std::to_string(p) + " is not an earlier node");
      prem.push_back(&d.nodes[it->second]);
    }
    StepOutcome out;
    try {
      out = check_step(ctx, n.rule, prem, n);
    } catch (const Error& e) {
      return bad(n.label, std::string(rule_name(n.rule)) + ": " + e.what());
    }
    if (!out.hyps) return bad(n.label, std::string(rule_name(n.rule)) + ": " + out.error);
    if (!detail::set_equal(*out.hyps, n.hyps))
      return bad(n.label, std::string(rule_name(n.rule)) + ": hypotheses do not match the discharge bookkeeping");
    pos.emplace(n.label, i);
  }
  const auto& last = d.nodes.back();
  for (const auto& h : last.hyps)
    if (!detail::contains(d.assumptions, h)) return bad(last.label, "undischarged hypothesis not among the assumptions");
  return {};
}

}  // namespace cteam
