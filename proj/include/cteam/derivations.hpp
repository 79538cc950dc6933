#pragma once

#include <fstream>
#include <sstream>

#include "cteam/proofs.hpp"
#include "cteam/syntax.hpp"

namespace cteam {

// Builds a derivation node by node; each step's hypotheses are computed from
// the rule's discharge bookkeeping, and an invalid step throws.
class DerivationBuilder {
 public:
  DerivationBuilder(SignaturePtr sig, Calculus calc) : ctx_(std::move(sig), calc) {}

  std::size_t hyp(Formula f) { return step(RuleId::Hyp, {}, std::move(f)); }

  std::size_t step(RuleId rule, std::vector<std::size_t> premises, Formula concl, SideData side = {}) {
    ProofNode n;
    n.label = d_.nodes.size() + 1;
    n.concl = std::move(concl);
    n.rule = rule;
    n.premises = std::move(premises);
    n.side = std::move(side);
    std::vector<const ProofNode*> prem;
    for (auto p : n.premises) {
      if (p == 0 || p > d_.nodes.size()) throw Error("builder: premise out of range");
      prem.push_back(&d_.nodes[p - 1]);
    }
    auto out = check_step(ctx_, rule, prem, n);
    if (!out.hyps) throw Error(std::string("builder: ") + rule_name(rule) + ": " + out.error);
    n.hyps = std::move(*out.hyps);
    d_.nodes.push_back(std::move(n));
    return d_.nodes.size();
  }

  const ProofNode& node(std::size_t label) const { return d_.nodes.at(label - 1); }

  Derivation finish(std::vector<Formula> assumptions) {
    d_.assumptions = std::move(assumptions);
    return std::move(d_);
  }

 private:
  ProofContext ctx_;
  Derivation d_;
};

struct LibraryEntry {
  std::string name;
  Calculus calculus;
  Derivation derivation;
};

namespace detail {

struct LibraryAtoms {
  EquationSeq ant;       // X=x
  Formula alpha, phi, psi, chi;
  VarId y;
};

inline LibraryAtoms library_atoms(const Signature& sig) {
  if (sig.size() < 2) throw Error("the derived-rule library needs at least two variables");
  LibraryAtoms a;
  a.ant = {{0, 0}};
  a.y = 1;
  ValId last = static_cast<ValId>(sig.range_size(1) - 1);
  a.alpha = eq(1, 0);
  a.phi = eq(1, last);
  a.psi = neq(0, 0);
  a.chi = cf({{1, 0}}, eq(0, 0));
  return a;
}

// A \/ B, [A] |- A \/ B', [B] |- A \/ B'  where B' is produced by `inner`.
template <typename F>
std::size_t or_map_right(DerivationBuilder& b, std::size_t major, F&& inner) {
  Formula d = b.node(major).concl;
  std::size_t ha = b.hyp(d->a);
  std::size_t hb = b.hyp(d->b);
  std::size_t nb = inner(hb);
  Formula target = disj(d->a, b.node(nb).concl);
  std::size_t l = b.step(RuleId::OrI_L, {ha}, target);
  std::size_t r = b.step(RuleId::OrI_R, {nb}, target);
  return b.step(RuleId::OrE, {major, l, r}, target);
}

// From X=x -> (D1 \/ (D2 \/ ...)) derive (X=x -> D1) \/ ((X=x -> D2) \/ ...).
inline std::size_t distribute_cf(DerivationBuilder& b, std::size_t n) {
  Formula f = b.node(n).concl;
  if (f->a->kind != Kind::Or) return n;
  Formula spread = disj(cf(f->antecedent, f->a->a), cf(f->antecedent, f->a->b));
  std::size_t s = b.step(RuleId::CfOrDst_fwd, {n}, spread);
  if (f->a->b->kind != Kind::Or) return s;
  return or_map_right(b, s, [&](std::size_t h) { return distribute_cf(b, h); });
}

}  // namespace detail

// Derivations of the derived CO rules and the connective-by-connective
// kernels relating a formula with its resolutions, instantiated over sig
// (needs at least two variables).
inline std::vector<LibraryEntry> derived_library(const SignaturePtr& sig) {
  const Signature& s = *sig;
  auto a = detail::library_atoms(s);
  std::vector<LibraryEntry> out;
  auto add = [&](std::string name, Calculus c, Derivation d) { out.push_back({std::move(name), c, std::move(d)}); };

  {  // alpha, ~alpha \/ phi |- phi
    DerivationBuilder b(sig, Calculus::CO);
    Formula major = disj(neg(a.alpha), a.phi);
    std::size_t h1 = b.hyp(a.alpha);
    std::size_t h2 = b.hyp(major);
    std::size_t l = b.hyp(neg(a.alpha));
    std::size_t e = b.step(RuleId::NegE, {h1, l}, a.phi);
    std::size_t r = b.hyp(a.phi);
    b.step(RuleId::OrE, {h2, e, r}, a.phi);
    add("weak_modus_ponens", Calculus::CO, b.finish({a.alpha, major}));
  }
  {  // X=x -> Y=y |- X=x -> Y!=y'
    DerivationBuilder b(sig, Calculus::CO);
    Formula prem = cf(a.ant, eq(a.y, 0));
    Formula goal = cf(a.ant, neq(a.y, 1));
    std::size_t h = b.hyp(prem);
    std::size_t y = b.hyp(eq(a.y, 0));
    std::size_t u = b.step(RuleId::ValUnq, {y}, neq(a.y, 1));
    b.step(RuleId::CfSub, {h, u}, goal);
    add("uniqueness", Calculus::CO, b.finish({prem}));
  }
  {  // X=x -> (phi /\ psi) |- X=x -> phi
    DerivationBuilder b(sig, Calculus::CO);
    Formula prem = cf(a.ant, conj(a.phi, a.psi));
    std::size_t h = b.hyp(prem);
    std::size_t c = b.hyp(conj(a.phi, a.psi));
    std::size_t l = b.step(RuleId::AndE_L, {c}, a.phi);
    b.step(RuleId::CfSub, {h, l}, cf(a.ant, a.phi));
    add("extraction", Calculus::CO, b.finish({prem}));
  }
  {  // ~(X=x -> alpha) |- X=x -> ~alpha
    DerivationBuilder b(sig, Calculus::CO);
    Formula prem = neg(cf(a.ant, a.alpha));
    std::size_t h = b.hyp(prem);
    b.step(RuleId::NegCfE, {h}, cf(a.ant, neg(a.alpha)));
    add("negation_cf_lr", Calculus::CO, b.finish({prem}));
  }
  {  // X=x -> ~alpha |- ~(X=x -> alpha)
    DerivationBuilder b(sig, Calculus::CO);
    Formula prem = cf(a.ant, neg(a.alpha));
    std::size_t h1 = b.hyp(prem);
    std::size_t h2 = b.hyp(cf(a.ant, a.alpha));
    std::size_t both = b.step(RuleId::CfAndI, {h1, h2}, cf(a.ant, conj(neg(a.alpha), a.alpha)));
    std::size_t c = b.hyp(conj(neg(a.alpha), a.alpha));
    std::size_t n = b.step(RuleId::AndE_L, {c}, neg(a.alpha));
    std::size_t p = b.step(RuleId::AndE_R, {c}, a.alpha);
    std::size_t f = b.step(RuleId::NegE, {p, n}, bot());
    std::size_t cb = b.step(RuleId::CfSub, {both, f}, cf(a.ant, bot()));
    std::size_t fb = b.step(RuleId::CfBotE, {cb}, bot());
    b.step(RuleId::NegI, {fb}, neg(cf(a.ant, a.alpha)));
    add("negation_cf_rl", Calculus::CO, b.finish({prem}));
  }
  for (std::size_t yv = 0; yv < s.size(); ++yv) {  // |- \/_y (X=x -> Y=y)
    auto y = static_cast<VarId>(yv);
    DerivationBuilder b(sig, Calculus::CO);
    std::vector<Formula> ys;
    for (std::size_t v = 0; v < s.range_size(y); ++v) ys.push_back(eq(y, static_cast<ValId>(v)));
    std::size_t eff = b.step(RuleId::CfEff, {}, cf(a.ant, eq(a.ant[0].var, a.ant[0].val)));
    std::size_t vd = b.step(RuleId::ValDef, {}, big_or(ys));
    std::size_t sub = b.step(RuleId::CfSub, {eff, vd}, cf(a.ant, big_or(ys)));
    detail::distribute_cf(b, sub);
    add("definiteness_" + s.name(y), Calculus::CO, b.finish({}));
  }

  const Calculus ci = Calculus::COi_gct;
  {  // phi /\ (psi \\/ chi) |- (phi /\ psi) \\/ (phi /\ chi)
    DerivationBuilder b(sig, ci);
    Formula prem = conj(a.phi, idisj(a.psi, a.chi));
    Formula goal = idisj(conj(a.phi, a.psi), conj(a.phi, a.chi));
    std::size_t h = b.hyp(prem);
    std::size_t p = b.step(RuleId::AndE_L, {h}, a.phi);
    std::size_t d = b.step(RuleId::AndE_R, {h}, idisj(a.psi, a.chi));
    std::size_t l = b.step(RuleId::AndI, {p, b.hyp(a.psi)}, goal->a);
    std::size_t li = b.step(RuleId::IDisjI_L, {l}, goal);
    std::size_t r = b.step(RuleId::AndI, {p, b.hyp(a.chi)}, goal->b);
    std::size_t ri = b.step(RuleId::IDisjI_R, {r}, goal);
    b.step(RuleId::IDisjE, {d, li, ri}, goal);
    add("and_idisj_fwd", ci, b.finish({prem}));
  }
  {  // (phi /\ psi) \\/ (phi /\ chi) |- phi /\ (psi \\/ chi)
    DerivationBuilder b(sig, ci);
    Formula prem = idisj(conj(a.phi, a.psi), conj(a.phi, a.chi));
    Formula goal = conj(a.phi, idisj(a.psi, a.chi));
    std::size_t h = b.hyp(prem);
    auto branch = [&](const Formula& part, RuleId intro) {
      std::size_t c = b.hyp(part);
      std::size_t p = b.step(RuleId::AndE_L, {c}, a.phi);
      std::size_t q = b.step(RuleId::AndE_R, {c}, part->b);
      std::size_t i = b.step(intro, {q}, goal->b);
      return b.step(RuleId::AndI, {p, i}, goal);
    };
    std::size_t l = branch(prem->a, RuleId::IDisjI_L);
    std::size_t r = branch(prem->b, RuleId::IDisjI_R);
    b.step(RuleId::IDisjE, {h, l, r}, goal);
    add("and_idisj_bwd", ci, b.finish({prem}));
  }
  {  // phi \/ (psi \\/ chi) |- (phi \/ psi) \\/ (phi \/ chi)
    DerivationBuilder b(sig, ci);
    Formula prem = disj(a.phi, idisj(a.psi, a.chi));
    std::size_t h = b.hyp(prem);
    b.step(RuleId::OrIDisjDst, {h}, idisj(disj(a.phi, a.psi), disj(a.phi, a.chi)));
    add("or_idisj_fwd", ci, b.finish({prem}));
  }
  {  // (phi \/ psi) \\/ (phi \/ chi) |- phi \/ (psi \\/ chi)
    DerivationBuilder b(sig, ci);
    Formula prem = idisj(disj(a.phi, a.psi), disj(a.phi, a.chi));
    Formula inner = idisj(a.psi, a.chi);
    Formula goal = disj(a.phi, inner);
    std::size_t h = b.hyp(prem);
    auto branch = [&](const Formula& part, RuleId intro) {
      std::size_t d = b.hyp(part);
      std::size_t sw = b.step(RuleId::OrCom, {d}, disj(part->b, part->a));
      std::size_t i = b.step(intro, {b.hyp(part->b)}, inner);
      std::size_t sub = b.step(RuleId::OrSub, {sw, i}, disj(inner, a.phi));
      return b.step(RuleId::OrCom, {sub}, goal);
    };
    std::size_t l = branch(prem->a, RuleId::IDisjI_L);
    std::size_t r = branch(prem->b, RuleId::IDisjI_R);
    b.step(RuleId::IDisjE, {h, l, r}, goal);
    add("or_idisj_bwd", ci, b.finish({prem}));
  }
  {  // X=x -> (psi \\/ chi) |- (X=x -> psi) \\/ (X=x -> chi)
    DerivationBuilder b(sig, ci);
    Formula prem = cf(a.ant, idisj(a.psi, a.chi));
    std::size_t h = b.hyp(prem);
    b.step(RuleId::CfIDisjDst, {h}, idisj(cf(a.ant, a.psi), cf(a.ant, a.chi)));
    add("cf_idisj_fwd", ci, b.finish({prem}));
  }
  {  // (X=x -> psi) \\/ (X=x -> chi) |- X=x -> (psi \\/ chi)
    DerivationBuilder b(sig, ci);
    Formula prem = idisj(cf(a.ant, a.psi), cf(a.ant, a.chi));
    Formula inner = idisj(a.psi, a.chi);
    Formula goal = cf(a.ant, inner);
    std::size_t h = b.hyp(prem);
    auto branch = [&](const Formula& part, const Formula& body, RuleId intro) {
      std::size_t c = b.hyp(part);
      std::size_t i = b.step(intro, {b.hyp(body)}, inner);
      return b.step(RuleId::CfSub, {c, i}, goal);
    };
    std::size_t l = branch(prem->a, a.psi, RuleId::IDisjI_L);
    std::size_t r = branch(prem->b, a.chi, RuleId::IDisjI_R);
    b.step(RuleId::IDisjE, {h, l, r}, goal);
    add("cf_idisj_bwd", ci, b.finish({prem}));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text format.
//
//   # comment
//   signature            (optional)
//     A: 0 1
//   end
//   assume <formula>
//   node <label>
//     hyp <formula>      (any number)
//     concl <formula>
//     rule <RuleId>
//     from <label> ...   (optional)
//     path 0 1 ...       (Dep0E: 0 = first child, 1 = second child)
//     chain X Y ...      (Recur)
//   end

// A node names a rule that does not exist; reported against the node.
class UnknownRuleError : public Error {
 public:
  UnknownRuleError(const std::string& msg, std::size_t node) : Error(msg), node_(node) {}
  std::size_t node() const { return node_; }

 private:
  std::size_t node_;
};

struct DerivationFile {
  SignaturePtr sig;  // null when the file declares none
  Derivation derivation;
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::pair<std::string, std::string> split_keyword(const std::string& line) {
  std::size_t sp = line.find_first_of(" \t");
  if (sp == std::string::npos) return {line, {}};
  return {line.substr(0, sp), trim(line.substr(sp + 1))};
}

inline std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// "A: 0 1" -> variable A with values 0 and 1.
inline Signature::Variable parse_signature_line(const std::string& line) {
  std::size_t colon = line.find(':');
  if (colon == std::string::npos) throw Error("expected 'NAME: value value ...'");
  Signature::Variable v;
  v.name = trim(line.substr(0, colon));
  v.range = words(line.substr(colon + 1));
  return v;
}

inline std::string line_error(std::size_t line, const std::string& msg) {
  return "line " + std::to_string(line) + ": " + msg;
}

}  // namespace detail

inline SignaturePtr signature_from_lines(const std::vector<std::pair<std::size_t, std::string>>& lines) {
  std::vector<Signature::Variable> vars;
  for (const auto& [no, text] : lines) {
    try {
      vars.push_back(detail::parse_signature_line(text));
    } catch (const Error& e) {
      throw Error(detail::line_error(no, e.what()));
    }
  }
  try {
    return make_signature(std::move(vars));
  } catch (const Error& e) {
    throw Error(detail::line_error(lines.empty() ? 0 : lines.front().first, e.what()));
  }
}

// sig_hint is used when the file has no signature block.
inline DerivationFile read_derivation(std::istream& in, SignaturePtr sig_hint = nullptr) {
  DerivationFile out;
  out.sig = nullptr;
  std::vector<std::pair<std::size_t, std::string>> lines;
  {
    std::string raw;
    std::size_t no = 0;
    while (std::getline(in, raw)) {
      ++no;
      std::string t = detail::trim(raw);
      if (t.empty() || t[0] == '#') continue;
      lines.emplace_back(no, t);
    }
  }
  std::size_t i = 0;
  if (i < lines.size() && lines[i].second == "signature") {
    std::size_t start = lines[i].first;
    std::vector<std::pair<std::size_t, std::string>> block;
    for (++i; i < lines.size() && lines[i].second != "end"; ++i) block.push_back(lines[i]);
    if (i == lines.size()) throw Error(detail::line_error(start, "unterminated signature block"));
    ++i;
    out.sig = signature_from_lines(block);
  }
  SignaturePtr sig = out.sig ? out.sig : sig_hint;
  if (!sig) throw Error("derivation file declares no signature and none was supplied");
  auto formula = [&](std::size_t no, const std::string& text) {
    try {
      return parse(text, *sig);
    } catch (const Error& e) {
      throw Error(detail::line_error(no, e.what()));
    }
  };
  auto number = [&](std::size_t no, const std::string& w) -> std::size_t {
    try {
      std::size_t used = 0;
      unsigned long v = std::stoul(w, &used);
      if (used != w.size()) throw std::invalid_argument(w);
      return v;
    } catch (const std::exception&) {
      throw Error(detail::line_error(no, "expected a number, got '" + w + "'"));
    }
  };
  for (; i < lines.size(); ++i) {
    auto [no, text] = lines[i];
    auto [kw, rest] = detail::split_keyword(text);
    if (kw == "assume") {
      out.derivation.assumptions.push_back(formula(no, rest));
      continue;
    }
    if (kw != "node") throw Error(detail::line_error(no, "expected 'assume' or 'node', got '" + kw + "'"));
    ProofNode n;
    n.label = number(no, rest);
    bool have_rule = false;
    std::size_t start = no;
    for (++i;; ++i) {
      if (i == lines.size()) throw Error(detail::line_error(start, "unterminated node block"));
      auto [lno, ltext] = lines[i];
      if (ltext == "end") break;
      auto [k, r] = detail::split_keyword(ltext);
      if (k == "hyp") n.hyps.push_back(formula(lno, r));
      else if (k == "concl") {
        if (n.concl) throw Error(detail::line_error(lno, "duplicate concl"));
        n.concl = formula(lno, r);
      } else if (k == "rule") {
        auto id = rule_from_name(r);
        if (!id) throw UnknownRuleError(detail::line_error(lno, "unknown rule '" + r + "'"), n.label);
        n.rule = *id;
        have_rule = true;
      } else if (k == "from") {
        for (const auto& w : detail::words(r)) n.premises.push_back(number(lno, w));
      } else if (k == "path") {
        for (const auto& w : detail::words(r)) {
          if (w != "0" && w != "1") throw Error(detail::line_error(lno, "path steps are 0 or 1"));
          n.side.path.push_back(w == "1");
        }
      } else if (k == "chain") {
        for (const auto& w : detail::words(r)) {
          auto v = sig->find_var(w);
          if (!v) throw Error(detail::line_error(lno, "unknown variable '" + w + "'"));
          n.side.chain.push_back(*v);
        }
      } else {
        throw Error(detail::line_error(lno, "unknown node field '" + k + "'"));
      }
    }
    if (!n.concl) throw Error(detail::line_error(start, "node without concl"));
    if (!have_rule) throw Error(detail::line_error(start, "node without rule"));
    out.derivation.nodes.push_back(std::move(n));
  }
  return out;
}

inline DerivationFile read_derivation_file(const std::string& path, SignaturePtr sig_hint = nullptr) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_derivation(in, std::move(sig_hint));
}

inline void write_signature_block(std::ostream& out, const Signature& sig) {
  out << "signature\n";
  for (std::size_t v = 0; v < sig.size(); ++v) {
    out << "  " << sig.name(static_cast<VarId>(v)) << ":";
    for (const auto& x : sig.range(static_cast<VarId>(v))) out << ' ' << x;
    out << '\n';
  }
  out << "end\n";
}

inline void write_derivation(std::ostream& out, const Derivation& d, const Signature& sig, bool with_signature = true) {
  if (with_signature) write_signature_block(out, sig);
  for (const auto& a : d.assumptions) out << "assume " << render(a, sig) << '\n';
  for (const auto& n : d.nodes) {
    out << "node " << n.label << '\n';
    for (const auto& h : n.hyps) out << "  hyp " << render(h, sig) << '\n';
    out << "  concl " << render(n.concl, sig) << '\n';
    out << "  rule " << rule_name(n.rule) << '\n';
    if (!n.premises.empty()) {
      out << "  from";
      for (auto p : n.premises) out << ' ' << p;
      out << '\n';
    }
    if (!n.side.path.empty()) {
      out << "  path";
      for (auto s : n.side.path) out << ' ' << s;
      out << '\n';
    }
    if (!n.side.chain.empty()) {
      out << "  chain";
      for (auto v : n.side.chain) out << ' ' << sig.name(v);
      out << '\n';
    }
    out << "end\n";
  }
}

}  // namespace cteam
