#pragma once

#include <functional>
#include <unordered_set>

#include "cteam/entailment.hpp"
#include "cteam/proofs.hpp"
#include "cteam/random_formula.hpp"
#include "cteam/syntax.hpp"

namespace cteam {

// One application of a rule: premise sequents and the conclusion sequent
// whose hypotheses come from the checker's bookkeeping.
struct RuleInstance {
  RuleId rule = RuleId::Hyp;
  std::vector<ProofNode> premises;
  ProofNode conclusion;
};

struct FuzzViolation {
  RuleInstance instance;
  Mode mode = Mode::GCT;
  std::optional<Team> counterexample;
  std::string text;
};

struct RuleReport {
  RuleId rule = RuleId::Hyp;
  std::size_t attempts = 0;
  std::size_t distinct = 0;             // accepted by the checker and new
  std::size_t tested = 0;               // with all premises valid
  std::size_t vacuous = 0;              // some premise invalid
  std::size_t generator_rejected = 0;   // generator produced a non-instance
  bool exact = true;
  std::vector<FuzzViolation> violations;
};

struct FuzzReport {
  Calculus calculus = Calculus::CO;
  std::vector<RuleReport> rules;

  std::size_t violation_count() const {
    std::size_t n = 0;
    for (const auto& r : rules) n += r.violations.size();
    return n;
  }
  bool clean() const { return violation_count() == 0; }
};

struct FuzzOptions {
  int depth = 2;
  std::size_t attempts_per_instance = 30;
  EntailOptions entail;
};

inline std::string render_instance(const RuleInstance& inst, const Signature& sig) {
  auto seq = [&](const ProofNode& n) {
    std::string s;
    for (std::size_t i = 0; i < n.hyps.size(); ++i) s += (i ? ", " : "") + render(n.hyps[i], sig);
    return s + " |- " + render(n.concl, sig);
  };
  std::string out = rule_name(inst.rule);
  out += ":";
  for (const auto& p : inst.premises) out += "  [" + seq(p) + "]";
  out += "  =>  [" + seq(inst.conclusion) + "]";
  return out;
}

namespace detail {

class InstanceGenerator {
 public:
  InstanceGenerator(ProofContext& ctx, CounterRng& rng, int depth)
      : ctx_(ctx), sig_(*ctx.sig()), rng_(rng), dialect_(calculus_dialect(ctx.calculus())), depth_(depth) {}

  // Premises and the conclusion formula; hypotheses of the conclusion are
  // filled in by the checker.
  struct Raw {
    std::vector<ProofNode> premises;
    Formula concl;
    SideData side;
  };

  std::optional<Raw> make(RuleId rule) {
    Raw r;
    auto major = [&](Formula f) { r.premises.push_back(sequent({f}, f)); };
    auto minor = [&](std::vector<Formula> hyps, Formula f) { r.premises.push_back(sequent(std::move(hyps), std::move(f))); };
    switch (rule) {
      case RuleId::Hyp: return std::nullopt;
      case RuleId::ValDef: {
        auto v = var();
        std::vector<Formula> ds;
        for (std::size_t x = 0; x < sig_.range_size(v); ++x) ds.push_back(eq(v, static_cast<ValId>(x)));
        r.concl = big_or(ds);
        break;
      }
      case RuleId::ValUnq: {
        auto v = var();
        if (sig_.range_size(v) < 2) return std::nullopt;
        auto x = val(v);
        auto y = static_cast<ValId>((x + 1 + rng_.below(sig_.range_size(v) - 1)) % sig_.range_size(v));
        major(eq(v, x));
        r.concl = neq(v, y);
        break;
      }
      case RuleId::AndI: {
        Formula a = F(), b = F();
        major(a);
        major(b);
        r.concl = conj(a, b);
        break;
      }
      case RuleId::AndE_L:
      case RuleId::AndE_R: {
        Formula a = F(), b = F();
        major(conj(a, b));
        r.concl = rule == RuleId::AndE_L ? a : b;
        break;
      }
      case RuleId::OrI_L:
      case RuleId::OrI_R: {
        Formula a = F(), b = F();
        major(a);
        r.concl = rule == RuleId::OrI_L ? disj(a, b) : disj(b, a);
        break;
      }
      case RuleId::OrE: {
        Formula alpha = CO();
        Formula phi = towards(alpha), psi = towards(alpha);
        major(disj(phi, psi));
        minor(with(context(), phi), alpha);
        minor(with(context(), psi), alpha);
        r.concl = alpha;
        break;
      }
      case RuleId::IDisjE: {
        Formula theta = F();
        Formula phi = towards(theta), psi = towards(theta);
        major(idisj(phi, psi));
        minor(with(context(), phi), theta);
        minor(with(context(), psi), theta);
        r.concl = theta;
        break;
      }
      case RuleId::NegI: {
        Formula alpha, g;
        switch (rng_.below(3)) {
          case 0: {
            Formula d = CO();
            alpha = conj(d, CO());
            g = neg(d);
            break;
          }
          case 1: alpha = CO(); g = neg(alpha); break;
          default: alpha = CO(); g = CO(); break;
        }
        minor({g, alpha}, falsum());
        r.concl = neg(alpha);
        break;
      }
      case RuleId::NegE: {
        Formula alpha = CO();
        major(alpha);
        major(neg(alpha));
        r.concl = F();
        break;
      }
      case RuleId::RAA: {
        Formula alpha = CO();
        Formula g = rng_.coin(2, 3) ? conj(alpha, CO()) : CO();
        minor({g, neg(alpha)}, falsum());
        r.concl = alpha;
        break;
      }
      case RuleId::CfEff: {
        auto a = antecedent();
        auto e = a[rng_.below(a.size())];
        r.concl = cf(a, eq(e.var, e.val));
        break;
      }
      case RuleId::CfCmp: {
        auto a = antecedent();
        Equation w = equation();
        Formula gamma = cf_free();
        major(cf(a, eq(w.var, w.val)));
        major(cf(shuffled(a), gamma));
        auto both = a;
        both.push_back(w);
        r.concl = cf(rng_.coin() ? both : shuffled(both), gamma);
        break;
      }
      case RuleId::CfBotE: {
        auto a = antecedent(false);
        major(cf(a, falsum()));
        r.concl = F();
        break;
      }
      case RuleId::BotCfE: {
        auto v = var();
        if (sig_.range_size(v) < 2) return std::nullopt;
        auto x = val(v);
        auto y = static_cast<ValId>((x + 1) % sig_.range_size(v));
        EquationSeq a = rng_.coin() ? antecedent() : EquationSeq{};
        a.push_back({v, x});
        a.push_back({v, y});
        r.concl = cf(shuffled(a), F());
        break;
      }
      case RuleId::CfCtr:
      case RuleId::CfWk: {
        auto b = antecedent();
        auto longer = b;
        longer.push_back(b[rng_.below(b.size())]);
        longer = shuffled(longer);
        Formula phi = F();
        major(cf(rule == RuleId::CfCtr ? longer : b, phi));
        r.concl = cf(rule == RuleId::CfCtr ? b : longer, phi);
        break;
      }
      case RuleId::CfSub: {
        auto a = antecedent();
        Formula phi = F();
        Formula psi = weaken(phi);
        major(cf(a, phi));
        minor({phi}, psi);
        r.concl = cf(a, psi);
        break;
      }
      case RuleId::CfAndI: {
        auto a = antecedent();
        Formula phi = F(), psi = F();
        major(cf(a, phi));
        major(cf(shuffled(a), psi));
        r.concl = cf(a, conj(phi, psi));
        break;
      }
      case RuleId::CfOrDst_fwd:
      case RuleId::CfOrDst_bwd:
      case RuleId::CfIDisjDst: {
        auto a = antecedent();
        Formula phi = F(), psi = F();
        bool intuit = rule == RuleId::CfIDisjDst;
        Formula packed = cf(a, intuit ? idisj(phi, psi) : disj(phi, psi));
        Formula l = cf(shuffled(a), phi), rr = cf(shuffled(a), psi);
        Formula spread = intuit ? idisj(l, rr) : disj(l, rr);
        bool fwd = rule != RuleId::CfOrDst_bwd;
        major(fwd ? packed : spread);
        r.concl = fwd ? spread : packed;
        break;
      }
      case RuleId::CfExtr: {
        auto x = antecedent(false);
        auto y = antecedent();
        Formula phi = F();
        major(cf(x, cf(y, phi)));
        auto yv = eq_vars(y);
        EquationSeq want;
        for (const auto& e : x)
          if (!std::binary_search(yv.begin(), yv.end(), e.var)) want.push_back(e);
        want.insert(want.end(), y.begin(), y.end());
        r.concl = cf(rng_.coin() ? want : shuffled(want), phi);
        break;
      }
      case RuleId::CfExp: {
        auto a = antecedent();
        auto vs = eq_vars(a);
        if (vs.size() < 2) return std::nullopt;
        std::vector<VarId> left;
        for (auto v : vs)
          if (rng_.coin()) left.push_back(v);
        if (left.empty() || left.size() == vs.size()) left = {vs[0]};
        EquationSeq x, y;
        for (const auto& e : a) (std::binary_search(left.begin(), left.end(), e.var) ? x : y).push_back(e);
        Formula phi = F();
        major(cf(shuffled(a), phi));
        r.concl = cf(x, cf(y, phi));
        break;
      }
      case RuleId::NegCfE: {
        auto a = antecedent();
        Formula alpha = CO();
        major(neg(cf(a, alpha)));
        r.concl = cf(a, neg(alpha));
        break;
      }
      case RuleId::Recur: {
        std::vector<VarId> all;
        for (std::size_t v = 0; v < sig_.size(); ++v) all.push_back(static_cast<VarId>(v));
        if (all.size() < 2) return std::nullopt;
        for (std::size_t i = all.size(); i > 1; --i) std::swap(all[i - 1], all[rng_.below(i)]);
        std::size_t k = 2 + rng_.below(std::min<std::size_t>(all.size(), 3) - 1);
        r.side.chain.assign(all.begin(), all.begin() + static_cast<long>(k));
        for (std::size_t i = 0; i + 1 < k; ++i) major(leadsto(sig_, r.side.chain[i], r.side.chain[i + 1]));
        r.concl = neg(leadsto(sig_, r.side.chain.back(), r.side.chain.front()));
        break;
      }
      case RuleId::OrCom: {
        Formula a = F(), b = F();
        major(disj(a, b));
        r.concl = disj(b, a);
        break;
      }
      case RuleId::OrAss: {
        Formula a = F(), b = F(), c = F();
        major(disj(disj(a, b), c));
        r.concl = disj(a, disj(b, c));
        break;
      }
      case RuleId::OrSub: {
        Formula phi = F(), psi = F();
        Formula chi = weaken(phi);
        major(disj(phi, psi));
        minor(with(context(), phi), chi);
        r.concl = disj(chi, psi);
        break;
      }
      case RuleId::IDisjI_L:
      case RuleId::IDisjI_R: {
        Formula a = F(), b = F();
        major(a);
        r.concl = rule == RuleId::IDisjI_L ? idisj(a, b) : idisj(b, a);
        break;
      }
      case RuleId::OrIDisjDst: {
        Formula a = F(), b = F(), c = F();
        major(disj(a, idisj(b, c)));
        r.concl = idisj(disj(a, b), disj(a, c));
        break;
      }
      case RuleId::Unf: r.concl = ctx_.unf_axiom(); break;
      case RuleId::OneFun: r.concl = ctx_.one_fun_axiom(); break;
      case RuleId::NoMix: r.concl = ctx_.no_mix_axiom(); break;
      case RuleId::DepI0: {
        auto v = var();
        major(eq(v, val(v)));
        r.concl = con(v);
        break;
      }
      case RuleId::DepI: {
        auto xs = some_vars();
        VarId y = rng_.coin() ? xs[rng_.below(xs.size())] : var();
        std::vector<Formula> hyps = context();
        if (rng_.coin(1, 3)) hyps.push_back(dep(xs, y));
        for (auto x : xs) hyps.push_back(con(x));
        minor(hyps, con(y));
        r.concl = dep(xs, y);
        break;
      }
      case RuleId::DepE: {
        auto xs = some_vars();
        VarId y = var();
        major(dep(xs, y));
        for (auto x : xs) major(con(x));
        r.concl = con(y);
        break;
      }
      case RuleId::Dep0E: {
        auto v = var();
        auto [phi, path] = embed(con(v), rng_.below(3));
        r.side.path = path;
        Formula theta = rng_.coin() ? phi : F();
        major(phi);
        for (std::size_t x = 0; x < sig_.range_size(v); ++x)
          minor(with(context(), replace_at(phi, path, eq(v, static_cast<ValId>(x)))), theta);
        r.concl = theta;
        break;
      }
    }
    return r;
  }

 private:
  static ProofNode sequent(std::vector<Formula> hyps, Formula f) {
    ProofNode n;
    n.hyps = std::move(hyps);
    n.concl = std::move(f);
    return n;
  }

  VarId var() { return static_cast<VarId>(rng_.below(sig_.size())); }
  ValId val(VarId v) { return static_cast<ValId>(rng_.below(sig_.range_size(v))); }
  Equation equation() { auto v = var(); return {v, val(v)}; }

  FormulaShape shape() const {
    FormulaShape s;
    s.depth = depth_;
    return s;
  }
  Formula F() { return random_formula(sig_, rng_, dialect_, shape()); }
  Formula CO() { return random_formula(sig_, rng_, Dialect::CO, shape()); }
  Formula cf_free() {
    for (int i = 0; i < 50; ++i) {
      Formula f = F();
      if (!f->has_cf) return f;
    }
    return eq(0, 0);
  }
  Formula falsum() { return rng_.coin() ? bot() : expand_bot(); }

  EquationSeq antecedent(bool allow_inconsistent = true) {
    FormulaShape s = shape();
    s.allow_inconsistent = allow_inconsistent;
    return random_antecedent(sig_, rng_, s);
  }
  EquationSeq shuffled(EquationSeq a) {
    for (std::size_t i = a.size(); i > 1; --i) std::swap(a[i - 1], a[rng_.below(i)]);
    return a;
  }
  std::vector<VarId> some_vars() {
    std::vector<VarId> xs;
    for (std::size_t v = 0; v < sig_.size(); ++v)
      if (rng_.coin()) xs.push_back(static_cast<VarId>(v));
    if (xs.empty()) xs.push_back(var());
    return xs;
  }

  std::vector<Formula> context() {
    if (rng_.coin(2, 3)) return {};
    return {F()};
  }
  static std::vector<Formula> with(std::vector<Formula> hs, Formula f) {
    hs.push_back(std::move(f));
    return hs;
  }

  // Candidates likely to entail target.
  Formula towards(const Formula& target) {
    switch (rng_.below(4)) {
      case 0: return target;
      case 1: return conj(target, F());
      case 2: return conj(F(), target);
      default: return F();
    }
  }
  // Candidates likely to be entailed by f.
  Formula weaken(const Formula& f) {
    switch (rng_.below(4)) {
      case 0: return f->kind == Kind::And ? f->a : f;
      case 1: return disj(f, F());
      case 2: return dialect_ == Dialect::COi ? idisj(F(), f) : disj(F(), f);
      default: return F();
    }
  }

  // A formula with hole at a positive position reachable by the returned path.
  std::pair<Formula, Path> embed(Formula hole, std::uint64_t depth) {
    if (depth == 0) return {hole, {}};
    auto [inner, p] = embed(hole, depth - 1);
    Path path;
    Formula f;
    switch (rng_.below(5)) {
      case 0: f = conj(inner, F()); path = {0}; break;
      case 1: f = disj(F(), inner); path = {1}; break;
      case 2: f = cf(antecedent(), inner); path = {0}; break;
      case 3: f = selimp(CO(), inner); path = {1}; break;
      default: f = dialect_ == Dialect::COi ? idisj(inner, F()) : conj(F(), inner);
               path = {static_cast<int>(dialect_ == Dialect::COi ? 0 : 1)};
    }
    path.insert(path.end(), p.begin(), p.end());
    return {f, path};
  }

  ProofContext& ctx_;
  const Signature& sig_;
  CounterRng& rng_;
  Dialect dialect_;
  int depth_;
};

inline bool trivially_valid(const ProofNode& n) { return contains(n.hyps, n.concl); }

}  // namespace detail

// Random instances of every rule of the calculus; each instance whose
// premise sequents are valid must have a valid conclusion sequent under the
// calculus's semantics (ct or gct; the CO calculus is checked under both).
inline FuzzReport soundness_fuzz(Calculus calc, const SignaturePtr& sig, std::size_t n, std::uint64_t seed,
                                 const FuzzOptions& opt = {}) {
  ProofContext ctx(sig, calc);
  const Universe* u = fcs_enumerable(*sig) ? &ctx.universe() : nullptr;
  std::vector<Mode> modes;
  if (calc == Calculus::CO) modes = {Mode::CT, Mode::GCT};
  else modes = {ct_calculus(calc) ? Mode::CT : Mode::GCT};
  FuzzReport report;
  report.calculus = calc;
  std::uint64_t stream = 0;
  for (RuleId rule : calculus_rules(calc)) {
    RuleReport rr;
    rr.rule = rule;
    CounterRng rng = CounterRng(seed).split(++stream);
    detail::InstanceGenerator gen(ctx, rng, opt.depth);
    std::unordered_set<std::string> seen;
    while (rr.distinct < n && rr.attempts < n * opt.attempts_per_instance) {
      ++rr.attempts;
      auto raw = gen.make(rule);
      if (!raw) continue;
      ProofNode c;
      c.concl = raw->concl;
      c.rule = rule;
      c.side = raw->side;
      std::vector<const ProofNode*> prem;
      for (const auto& p : raw->premises) prem.push_back(&p);
      auto out = check_step(ctx, rule, prem, c);
      if (!out.hyps) {
        ++rr.generator_rejected;
        continue;
      }
      c.hyps = *out.hyps;
      RuleInstance inst{rule, raw->premises, c};
      std::string text = render_instance(inst, *sig);
      if (!seen.insert(text).second) continue;
      ++rr.distinct;
      for (Mode m : modes) {
        bool premises_valid = true;
        for (const auto& p : inst.premises) {
          if (detail::trivially_valid(p)) continue;
          Verdict v = entails(p.hyps, p.concl, sig, m, opt.entail, u);
          rr.exact = rr.exact && v.exact;
          if (!v.holds) {
            premises_valid = false;
            break;
          }
        }
        if (!premises_valid) {
          ++rr.vacuous;
          continue;
        }
        ++rr.tested;
        Verdict v = entails(c.hyps, c.concl, sig, m, opt.entail, u);
        rr.exact = rr.exact && v.exact;
        if (!v.holds)
          rr.violations.push_back({inst, m, v.counterexample, text});
      }
    }
    report.rules.push_back(std::move(rr));
  }
  return report;
}

}  // namespace cteam
