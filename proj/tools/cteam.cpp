#include <chrono>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cteam/cteam.hpp"

using namespace cteam;
using json = nlohmann::json;

namespace {

constexpr int kHolds = 0;
constexpr int kFails = 1;
constexpr int kUsage = 2;
constexpr std::uint64_t kLargeFormula = 1'000'000;

struct UsageError : Error {
  using Error::Error;
};

bool g_json = false;

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

void warn_if_large(const Formula& f) {
  if (f->size > kLargeFormula)
    std::cerr << "warning: formula has " << f->size << " nodes (more than " << kLargeFormula << ")\n";
}

std::string team_kind(const Team& t) { return std::holds_alternative<CausalTeam>(t) ? "ct" : "gct"; }

const Team& need_team(const Workspace& ws, const std::string& name) {
  const Team* t = ws.find_team(name);
  if (!t) throw UsageError("no team named '" + name + "' in the workspace");
  return *t;
}

const CausalTeam& need_ct(const Workspace& ws, const std::string& name) {
  const auto* ct = std::get_if<CausalTeam>(&need_team(ws, name));
  if (!ct) throw UsageError("team '" + name + "' is not a causal team");
  return *ct;
}

VarId need_var(const Signature& sig, const std::string& name) {
  auto v = sig.find_var(name);
  if (!v) throw UsageError("unknown variable '" + name + "'");
  return *v;
}

Dialect dialect_from(const std::string& s) {
  if (s == "cod") return Dialect::COD;
  if (s == "coi") return Dialect::COi;
  throw UsageError("dialect must be cod or coi");
}

Team members_team(const ModelChecker& mc, const ModelChecker::Members& ms, const Team& like) {
  if (auto* ct = std::get_if<CausalTeam>(&like)) {
    std::vector<Assignment> rows;
    for (const auto& p : ms) rows.push_back(mc.member(p).assignment);
    return CausalTeam(ct->fc(), std::move(rows));
  }
  std::vector<Member> out;
  for (const auto& p : ms) out.push_back(mc.member(p));
  return GeneralizedCausalTeam(std::get<GeneralizedCausalTeam>(like).signature_ptr(), std::move(out));
}

struct Budget {
  std::size_t max_sem = UniverseBudget{}.max_sem_size;
  std::size_t samples = UniverseBudget{}.sample_count;
  std::uint64_t seed = 0;
  unsigned jobs = 1;

  void add(CLI::App* app) {
    app->add_option("--max-sem,--budget", max_sem, "largest |Sem| (or log2 of the causal-team count) searched exhaustively");
    app->add_option("--samples", samples, "teams drawn when the universe is too large");
    app->add_option("--seed", seed, "seed for sampled search");
    app->add_option("--jobs", jobs, "worker threads for team scans");
  }
  EntailOptions options() const {
    EntailOptions o;
    o.budget.max_sem_size = max_sem;
    o.budget.sample_count = samples;
    o.budget.rng_seed = seed;
    o.jobs = std::max(1u, jobs);
    return o;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal and generalized causal team semantics toolkit"};
  app.require_subcommand(1);
  app.add_flag("--json", g_json, "machine-readable output");
  std::function<int()> run;

  // check
  std::string ws_path, team_name, formula_text;
  bool witness = false;
  auto* check = app.add_subcommand("check", "model-check a formula on a team");
  check->add_option("workspace", ws_path)->required();
  check->add_option("team", team_name)->required();
  check->add_option("formula", formula_text)->required();
  check->add_flag("--witness", witness, "print the split or disjunct that makes a top-level disjunction hold");
  check->callback([&] {
    run = [&] {
      Workspace ws = read_workspace_file(ws_path);
      const Team& t = need_team(ws, team_name);
      Formula f = parse(formula_text, *ws.sig);
      ModelChecker mc(ws.sig);
      bool holds = mc.check(t, f);
      json j{{"holds", holds}, {"team", team_name}, {"formula", render(f, *ws.sig)}};
      std::string text = holds ? "holds" : "fails";
      if (witness && holds && f->kind == Kind::Or) {
        auto ms = std::visit([&](const auto& x) { return mc.to_members(x); }, t);
        if (auto sp = mc.split_witness(ms, f)) {
          Team l = members_team(mc, sp->left, t), r = members_team(mc, sp->right, t);
          text += "\nleft part satisfies " + render(f->a, *ws.sig) + ":\n" + format_table(l, *ws.sig);
          text += "right part satisfies " + render(f->b, *ws.sig) + ":\n" + format_table(r, *ws.sig);
          j["witness"] = {{"left", format_table(l, *ws.sig)}, {"right", format_table(r, *ws.sig)}};
        }
      } else if (witness && holds && f->kind == Kind::IntDisj) {
        bool left = mc.check(t, f->a);
        text += std::string("\nthe ") + (left ? "left" : "right") + " disjunct holds: " +
                render(left ? f->a : f->b, *ws.sig);
        j["witness"] = left ? "left" : "right";
      }
      if (g_json) emit(j);
      else std::cout << text << (text.back() == '\n' ? "" : "\n");
      return holds ? kHolds : kFails;
    };
  });

  // intervene
  std::string eq_text, out_path, new_name;
  auto* intervene = app.add_subcommand("intervene", "apply do(X=x) to a team and write a workspace");
  intervene->add_option("workspace", ws_path)->required();
  intervene->add_option("team", team_name)->required();
  intervene->add_option("equations", eq_text, "e.g. \"X=1 /\\ Y=2\"")->required();
  intervene->add_option("-o,--out", out_path, "output workspace (default: standard output)");
  intervene->add_option("--name", new_name, "name of the new team (default TEAM_do)");
  intervene->callback([&] {
    run = [&] {
      Workspace ws = read_workspace_file(ws_path);
      const Team& t = need_team(ws, team_name);
      EquationSeq eqs = parse_equations(eq_text, *ws.sig);
      if (!eq_consistent(eqs)) throw UsageError("inconsistent intervention");
      Team result = std::visit(
          [&](const auto& x) -> Team {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, CausalTeam>) return intervene_ct(x, eqs);
            else return intervene_gct(x, eqs);
          },
          t);
      std::string name = new_name.empty() ? team_name + "_do" : new_name;
      ws.add_team(name, result, "F_do");
      std::string text = workspace_text(ws);
      if (out_path.empty()) std::cout << text;
      else {
        std::ofstream out(out_path);
        if (!out) throw UsageError("cannot write " + out_path);
        out << text;
        if (g_json) emit({{"team", name}, {"kind", team_kind(result)}, {"out", out_path}});
        else std::cout << format_table(result, *ws.sig);
      }
      return kHolds;
    };
  });

  // table
  auto* table = app.add_subcommand("table", "print a team as a row table");
  table->add_option("workspace", ws_path)->required();
  table->add_option("team", team_name)->required();
  table->callback([&] {
    run = [&] {
      Workspace ws = read_workspace_file(ws_path);
      std::cout << format_table(need_team(ws, team_name), *ws.sig);
      return kHolds;
    };
  });

  // entail
  std::string mode_text = "gct", conclusion_text, strategy_text = "auto", cex_path;
  std::vector<std::string> premise_texts;
  Budget budget;
  auto* entail = app.add_subcommand("entail", "decide premises |= conclusion by enumeration");
  entail->add_option("--sig,--workspace", ws_path, "file with a signature block")->required();
  entail->add_option("--mode", mode_text, "ct or gct")->check(CLI::IsMember({"ct", "gct"}));
  entail->add_option("--premise", premise_texts, "premise formula (repeatable)");
  entail->add_option("--conclusion", conclusion_text)->required();
  entail->add_option("--strategy", strategy_text)->check(CLI::IsMember({"auto", "exhaustive", "maximal", "sampled"}));
  entail->add_option("--counterexample", cex_path, "write a counterexample workspace here");
  budget.add(entail);
  entail->callback([&] {
    run = [&] {
      Workspace ws = read_workspace_file(ws_path);
      std::vector<Formula> prem;
      for (const auto& p : premise_texts) prem.push_back(parse(p, *ws.sig));
      Formula c = parse(conclusion_text, *ws.sig);
      EntailOptions opt = budget.options();
      opt.strategy = strategy_text == "exhaustive" ? Strategy::Exhaustive
                     : strategy_text == "maximal"  ? Strategy::MaximalTeams
                     : strategy_text == "sampled"  ? Strategy::Sampled
                                                   : Strategy::Auto;
      Mode mode = mode_text == "ct" ? Mode::CT : Mode::GCT;
      Verdict v = entails(prem, c, ws.sig, mode, opt);
      json j{{"holds", v.holds}, {"mode", mode_name(v.mode)}, {"exact", v.exact},
             {"strategy", strategy_name(v.strategy)}, {"teams_checked", v.teams_checked}};
      std::string cex;
      if (v.counterexample) {
        cex = format_table(*v.counterexample, *ws.sig);
        j["counterexample"] = cex;
        if (!cex_path.empty()) {
          Workspace out;
          out.sig = ws.sig;
          out.add_team("counterexample", *v.counterexample, "F");
          std::ofstream o(cex_path);
          if (!o) throw UsageError("cannot write " + cex_path);
          o << workspace_text(out);
        }
      }
      if (g_json) emit(j);
      else {
        std::cout << (v.holds ? "holds" : "fails") << " (" << mode_name(v.mode) << ", "
                  << (v.exact ? "exact" : "sampled, not a proof") << ", " << strategy_name(v.strategy) << ", "
                  << v.teams_checked << " teams checked)\n";
        if (!cex.empty()) std::cout << "counterexample:\n" << cex;
      }
      return v.holds ? kHolds : kFails;
    };
  });

  // charform
  std::string which, fc_name, dialect_text = "cod";
  std::vector<std::string> cf_args, team_names;
  bool literal = false, close = false;
  auto* charform = app.add_subcommand("charform", "print a characteristic formula");
  charform->add_option("which", which)
      ->required()
      ->check(CLI::IsMember({"phi", "theta", "chi", "xi", "xistar", "unf", "betadc", "betaen", "onefun", "nomix",
                             "leadsto", "defineflat", "definedown"}));
  charform->add_option("args", cf_args, "chi: K; betadc/leadsto: X Y; betaen: V");
  charform->add_option("--sig,--workspace", ws_path)->required();
  charform->add_option("--fc", fc_name, "function component (phi)");
  charform->add_option("--team", team_names, "team (theta, xi, xistar; repeatable for define*)");
  charform->add_option("--dialect", dialect_text, "cod or coi")->check(CLI::IsMember({"cod", "coi"}));
  charform->add_flag("--literal", literal, "phi: constrain every endogenous variable, constant ones included");
  charform->add_flag("--close", close, "define*: close the given teams under the class properties first");
  charform->callback([&] {
    run = [&] {
      Workspace ws = read_workspace_file(ws_path);
      const Signature& sig = *ws.sig;
      Dialect d = dialect_from(dialect_text);
      auto arg = [&](std::size_t i) -> const std::string& {
        if (cf_args.size() <= i) throw UsageError(which + " needs " + std::to_string(i + 1) + " argument(s)");
        return cf_args[i];
      };
      auto one_team = [&]() -> const std::string& {
        if (team_names.size() != 1) throw UsageError(which + " needs exactly one --team");
        return team_names[0];
      };
      std::optional<Universe> u;
      auto universe = [&]() -> const Universe& {
        if (!u) {
          if (!fcs_enumerable(sig)) throw UsageError("signature too large to enumerate function components");
          u = build_universe(ws.sig);
        }
        return *u;
      };
      Formula f;
      if (which == "phi") {
        const FunctionComponent* fc = ws.find_fc(fc_name);
        if (!fc) throw UsageError("no fc named '" + fc_name + "'");
        f = phi_F(*fc, literal ? PhiForm::Literal : PhiForm::Proper);
      } else if (which == "theta") {
        const Team& t = need_team(ws, one_team());
        std::vector<Assignment> rows;
        if (auto* ct = std::get_if<CausalTeam>(&t)) rows = ct->rows();
        else rows = std::get<GeneralizedCausalTeam>(t).assignments();
        f = theta_T(sig, rows);
      } else if (which == "chi") {
        f = chi_k(std::stoul(arg(0)), sig, d);
      } else if (which == "xi") {
        f = xi_T(need_ct(ws, one_team()), universe(), d);
      } else if (which == "xistar") {
        f = xi_star(need_ct(ws, one_team()), universe(), d);
      } else if (which == "unf") {
        f = unf(universe());
      } else if (which == "betadc") {
        f = beta_dc(sig, need_var(sig, arg(0)), need_var(sig, arg(1)));
      } else if (which == "betaen") {
        f = beta_en(sig, need_var(sig, arg(0)));
      } else if (which == "onefun") {
        f = one_fun(sig);
      } else if (which == "nomix") {
        f = no_mix(universe());
      } else if (which == "leadsto") {
        f = leadsto(sig, need_var(sig, arg(0)), need_var(sig, arg(1)));
      } else {
        if (team_names.empty()) throw UsageError(which + " needs at least one --team");
        std::vector<CausalTeam> seed;
        for (const auto& n : team_names) seed.push_back(need_ct(ws, n));
        bool flat = which == "defineflat";
        TeamClass k{ws.sig, {}};
        if (close) k = flat ? close_flat(seed, universe()) : close_downward(seed, universe());
        else k.members.insert(seed.begin(), seed.end());
        try {
          f = flat ? define_flat_class(k, universe()) : define_downward_class(k, universe());
        } catch (const DefinabilityError& e) {
          std::cerr << "error: " << e.what() << "\nwitness:\n" << format_table(Team(e.witness()), sig);
          return kUsage;
        }
        if (!g_json) std::cerr << "class of " << k.members.size() << " causal teams\n";
      }
      warn_if_large(f);
      if (g_json) emit({{"formula", render(f, sig)}, {"dialect", dialect_name(classify(f).dialect)}, {"size", f->size}});
      else std::cout << render(f, sig) << '\n';
      return kHolds;
    };
  });

  // resolve
  auto* resolve = app.add_subcommand("resolve", "list the resolutions of a formula");
  resolve->add_option("formula", formula_text)->required();
  resolve->add_option("--sig,--workspace", ws_path)->required();
  resolve->callback([&] {
    run = [&] {
      Workspace ws = read_workspace_file(ws_path);
      Formula f = parse(formula_text, *ws.sig);
      if (f->has_dep) f = desugar(f, *ws.sig, true);
      auto rs = resolutions(f);
      if (g_json) {
        json arr = json::array();
        for (const auto& r : rs) arr.push_back(render(r, *ws.sig));
        emit({{"resolutions", arr}});
      } else {
        for (const auto& r : rs) std::cout << render(r, *ws.sig) << '\n';
      }
      return kHolds;
    };
  });

  // proofcheck
  std::string drv_path, calc_text;
  auto* proofcheck = app.add_subcommand("proofcheck", "check a derivation file");
  proofcheck->add_option("derivation", drv_path)->required();
  proofcheck->add_option("--calculus", calc_text, "co, coi-gct, coi-ct, cod-gct, cod-ct")
      ->required()
      ->check(CLI::IsMember({"co", "coi-gct", "coi-ct", "cod-gct", "cod-ct"}));
  proofcheck->add_option("--sig,--workspace", ws_path, "signature when the derivation declares none");
  proofcheck->callback([&] {
    run = [&] {
      SignaturePtr hint;
      if (!ws_path.empty()) hint = read_workspace_file(ws_path).sig;
      DerivationFile file;
      try {
        file = read_derivation_file(drv_path, hint);
      } catch (const UnknownRuleError& e) {
        if (g_json) emit({{"ok", false}, {"node", e.node()}, {"reason", e.what()}});
        else std::cout << "error at node " << e.node() << ": " << e.what() << '\n';
        return kFails;
      }
      SignaturePtr sig = file.sig ? file.sig : hint;
      Calculus c = *calculus_from_name(calc_text);
      CheckResult r = cteam::check(file.derivation, c, sig);
      if (g_json) emit({{"ok", r.ok}, {"node", r.node}, {"reason", r.reason}});
      else if (r.ok) std::cout << "ok (" << file.derivation.nodes.size() << " nodes)\n";
      else if (r.node == 0) std::cout << "error: " << r.reason << '\n';
      else std::cout << "error at node " << r.node << ": " << r.reason << '\n';
      return r.ok ? kHolds : kFails;
    };
  });

  // library
  std::string lib_dir;
  auto* library = app.add_subcommand("library", "write the derived-rule derivations for a signature");
  library->add_option("--sig,--workspace", ws_path)->required();
  library->add_option("-o,--out", lib_dir, "directory for .drv files (default: list only)");
  library->callback([&] {
    run = [&] {
      Workspace ws = read_workspace_file(ws_path);
      int status = kHolds;
      for (const auto& e : derived_library(ws.sig)) {
        CheckResult r = cteam::check(e.derivation, e.calculus, ws.sig);
        if (!r.ok) status = kFails;
        std::cout << e.name << " [" << calculus_name(e.calculus) << "] " << (r.ok ? "ok" : "error: " + r.reason) << '\n';
        if (!lib_dir.empty()) {
          std::filesystem::create_directories(lib_dir);
          std::ofstream o(std::filesystem::path(lib_dir) / (e.name + ".drv"));
          o << "# calculus: " << calculus_name(e.calculus) << '\n';
          write_derivation(o, e.derivation, *ws.sig);
        }
      }
      return status;
    };
  });

  // fuzz
  std::size_t fuzz_n = 50;
  std::uint64_t fuzz_seed = 1;
  auto* fuzz = app.add_subcommand("fuzz", "check every rule of a calculus on random instances");
  fuzz->add_option("--calculus", calc_text)
      ->required()
      ->check(CLI::IsMember({"co", "coi-gct", "coi-ct", "cod-gct", "cod-ct"}));
  fuzz->add_option("--sig,--workspace", ws_path)->required();
  fuzz->add_option("-n", fuzz_n, "instances per rule");
  fuzz->add_option("--seed", fuzz_seed);
  fuzz->callback([&] {
    run = [&] {
      Workspace ws = read_workspace_file(ws_path);
      FuzzReport rep = soundness_fuzz(*calculus_from_name(calc_text), ws.sig, fuzz_n, fuzz_seed);
      json rules = json::array();
      for (const auto& r : rep.rules) {
        json vs = json::array();
        for (const auto& v : r.violations) vs.push_back({{"mode", mode_name(v.mode)}, {"instance", v.text}});
        rules.push_back({{"rule", rule_name(r.rule)}, {"distinct", r.distinct}, {"tested", r.tested},
                         {"vacuous", r.vacuous}, {"exact", r.exact}, {"violations", vs}});
        if (!g_json) {
          std::cout << rule_name(r.rule) << ": " << r.distinct << " instances, " << r.tested << " checked, "
                    << r.vacuous << " with an invalid premise, " << r.violations.size() << " violations"
                    << (r.exact ? "" : " (inexact search)") << '\n';
          for (const auto& v : r.violations) std::cout << "  VIOLATION (" << mode_name(v.mode) << ") " << v.text << '\n';
        }
      }
      if (g_json) emit({{"calculus", calc_text}, {"violations", rep.violation_count()}, {"rules", rules}});
      return rep.clean() ? kHolds : kFails;
    };
  });

  // enumerate
  std::string list_what;
  auto* enumerate = app.add_subcommand("enumerate", "count or list assignments, function components and teams");
  enumerate->add_option("--sig,--workspace", ws_path)->required();
  enumerate->add_option("--list", list_what, "assignments, fcs or reps")->check(CLI::IsMember({"assignments", "fcs", "reps"}));
  enumerate->callback([&] {
    run = [&] {
      Workspace ws = read_workspace_file(ws_path);
      const Signature& sig = *ws.sig;
      UniverseCounts c = universe_counts(sig);
      json j{{"assignments", static_cast<double>(sig.assignment_count())},
             {"function_components", static_cast<double>(c.function_components)},
             {"sem", static_cast<double>(c.sem)},
             {"causal_teams", static_cast<double>(c.causal_teams)}};
      std::optional<Universe> u;
      if (fcs_enumerable(sig)) {
        u = build_universe(ws.sig);
        j["similarity_classes"] = u->rep_count();
      }
      if (g_json) emit(j);
      else {
        std::cout << "assignments: " << sig.assignment_count() << '\n'
                  << "function components: " << static_cast<double>(c.function_components) << '\n';
        if (u) std::cout << "similarity classes: " << u->rep_count() << '\n';
        std::cout << "|Sem|: " << static_cast<double>(c.sem) << '\n'
                  << "causal teams: " << static_cast<double>(c.causal_teams) << '\n';
      }
      if (list_what == "assignments")
        for (const auto& s : enum_assignments(sig)) std::cout << format_assignment(sig, s) << '\n';
      else if (!list_what.empty()) {
        if (!u) throw UsageError("signature too large to list function components");
        bool reps = list_what == "reps";
        std::size_t n = reps ? u->rep_count() : u->fcs.size();
        for (std::size_t k = 0; k < n; ++k) {
          std::cout << '\n';
          write_fc(std::cout, (reps ? "R" : "F") + std::to_string(k + 1), reps ? u->rep(k) : u->fcs[k]);
        }
      }
      return kHolds;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }
  try {
    return run();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
