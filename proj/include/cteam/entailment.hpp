#pragma once

#include <atomic>
#include <thread>

#include "cteam/enumeration.hpp"
#include "cteam/resolutions.hpp"
#include "cteam/semantics.hpp"

namespace cteam {

enum class Mode { CT, GCT };

inline const char* mode_name(Mode m) { return m == Mode::CT ? "ct" : "gct"; }

enum class Strategy {
  Auto,
  Exhaustive,    // every team of the universe
  MaximalTeams,  // exact: largest team satisfying each resolution of the premises
  Sampled,
};

inline const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Auto: return "auto";
    case Strategy::Exhaustive: return "exhaustive";
    case Strategy::MaximalTeams: return "maximal-teams";
    case Strategy::Sampled: return "sampled";
  }
  return "?";
}

struct EntailOptions {
  UniverseBudget budget;
  Strategy strategy = Strategy::Auto;
  std::size_t max_resolutions = 4096;
  unsigned jobs = 1;
  bool minimize = true;  // shrink counterexamples found by MaximalTeams
};

struct Verdict {
  bool holds = true;
  Mode mode = Mode::GCT;
  bool exact = true;
  std::optional<Team> counterexample;
  Strategy strategy = Strategy::Exhaustive;
  std::uint64_t teams_checked = 0;
};

namespace detail {

// Index space of teams for exhaustive or sampled search; team_at is pure so
// ranges can be scanned in parallel.
class TeamSpace {
 public:
  TeamSpace(const SignaturePtr& sig, Mode mode, const UniverseBudget& budget, const Universe* u)
      : sig_(sig), mode_(mode), budget_(budget), u_(u) {
    exact_ = mode == Mode::CT ? ct_enumeration_exact(*sig, budget) : gct_enumeration_exact(*sig, budget);
    if (exact_ && mode == Mode::CT) {
      std::uint64_t acc = 0;
      for (const auto& rows : u_->compatible) {
        offsets_.push_back(acc);
        acc += std::uint64_t{1} << rows.size();
      }
      size_ = acc;
    } else if (exact_) {
      size_ = std::uint64_t{1} << u_->sem.size();
    } else {
      size_ = budget.sample_count;
    }
  }

  bool exact() const { return exact_; }
  std::uint64_t size() const { return size_; }

  Team at(std::uint64_t i) const {
    if (exact_ && mode_ == Mode::CT) {
      auto it = std::upper_bound(offsets_.begin(), offsets_.end(), i);
      std::size_t f = static_cast<std::size_t>(it - offsets_.begin()) - 1;
      return CausalTeam(u_->fcs[f], pick_bits(u_->compatible[f], i - offsets_[f]));
    }
    if (exact_) return GeneralizedCausalTeam(sig_, pick_bits(u_->sem, i));
    CounterRng rng = CounterRng(budget_.rng_seed).split(i);
    if (mode_ == Mode::CT) {
      if (u_) {
        std::size_t f = rng.below(u_->fcs.size());
        return CausalTeam(u_->fcs[f], pick_random(u_->compatible[f], rng));
      }
      FunctionComponent f = random_function_component(sig_, rng);
      std::vector<Assignment> rows;
      std::size_t m = rng.below(7);
      for (std::size_t j = 0; j < m; ++j) rows.push_back(random_compatible(f, rng));
      return CausalTeam(f, std::move(rows));
    }
    if (u_) return GeneralizedCausalTeam(sig_, pick_random(u_->sem, rng));
    std::vector<Member> ms;
    std::size_t m = rng.below(7);
    for (std::size_t j = 0; j < m; ++j) {
      FunctionComponent f = random_function_component(sig_, rng);
      ms.push_back({random_compatible(f, rng), f});
    }
    return GeneralizedCausalTeam(sig_, std::move(ms));
  }

 private:
  SignaturePtr sig_;
  Mode mode_;
  UniverseBudget budget_;
  const Universe* u_;
  bool exact_ = false;
  std::uint64_t size_ = 0;
  std::vector<std::uint64_t> offsets_;
};

inline bool holds_all(ModelChecker& mc, const Team& t, const std::vector<Formula>& fs) {
  for (const auto& f : fs)
    if (!mc.check(t, f)) return false;
  return true;
}

inline Verdict scan(const TeamSpace& space, const std::vector<Formula>& premises,
                    const Formula& conclusion, const SignaturePtr& sig, Mode mode, unsigned jobs) {
  Verdict v;
  v.mode = mode;
  v.exact = space.exact();
  v.strategy = space.exact() ? Strategy::Exhaustive : Strategy::Sampled;
  std::uint64_t n = space.size();
  std::atomic<std::uint64_t> first_bad{n};
  std::atomic<std::uint64_t> checked{0};
  auto work = [&](std::uint64_t lo, std::uint64_t hi) {
    ModelChecker mc(sig);
    for (std::uint64_t i = lo; i < hi && i < first_bad.load(); ++i) {
      Team t = space.at(i);
      ++checked;
      if (holds_all(mc, t, premises) && !mc.check(t, conclusion)) {
        std::uint64_t cur = first_bad.load();
        while (i < cur && !first_bad.compare_exchange_weak(cur, i)) {
        }
        return;
      }
    }
  };
  jobs = std::max(1u, jobs);
  if (jobs == 1 || n < 64) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    std::uint64_t chunk = (n + jobs - 1) / jobs;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work, j * chunk, std::min(n, (j + 1) * chunk));
    for (auto& t : pool) t.join();
  }
  v.teams_checked = checked.load();
  if (first_bad.load() < n) {
    v.holds = false;
    v.counterexample = space.at(first_bad.load());
  }
  return v;
}

// Resolutions of each premise after translating dependence atoms; empty when
// the product exceeds the limit.
inline std::optional<std::vector<std::vector<Formula>>> premise_resolutions(
    const std::vector<Formula>& premises, const Signature& sig, std::size_t limit) {
  std::vector<std::vector<Formula>> out;
  long double product = 1;
  try {
    for (const auto& p : premises) {
      out.push_back(resolutions(desugar(p, sig, true), limit));
      product *= static_cast<long double>(out.back().size());
      if (product > static_cast<long double>(limit)) return std::nullopt;
    }
  } catch (const Error&) {
    return std::nullopt;
  }
  return out;
}

class MaximalSearch {
 public:
  MaximalSearch(const SignaturePtr& sig, Mode mode, const Universe& u,
                std::vector<std::vector<Formula>> premise_res, Formula conclusion,
                std::optional<std::vector<Formula>> conclusion_res, std::vector<Formula> premises)
      : sig_(sig), mode_(mode), u_(u), pres_(std::move(premise_res)), concl_(std::move(conclusion)),
        concl_res_(std::move(conclusion_res)), premises_(std::move(premises)), mc_(sig) {}

  Verdict run(bool minimize) {
    Verdict v;
    v.mode = mode_;
    v.strategy = Strategy::MaximalTeams;
    if (mode_ == Mode::GCT) {
      if (auto bad = search(u_.sem, v)) {
        v.holds = false;
        auto ms = *bad;
        if (minimize) shrink(ms, [&](const std::vector<Member>& x) { return fails(GeneralizedCausalTeam(sig_, x)); });
        v.counterexample = GeneralizedCausalTeam(sig_, ms);
      }
      return v;
    }
    for (std::size_t f = 0; f < u_.fcs.size(); ++f) {
      std::vector<Member> ms;
      for (const auto& s : u_.compatible[f]) ms.push_back({s, u_.fcs[f]});
      if (auto bad = search(ms, v)) {
        v.holds = false;
        auto rows_of = [](const std::vector<Member>& x) {
          std::vector<Assignment> r;
          for (const auto& m : x) r.push_back(m.assignment);
          return r;
        };
        auto ms2 = *bad;
        if (minimize)
          shrink(ms2, [&](const std::vector<Member>& x) { return fails(CausalTeam(u_.fcs[f], rows_of(x))); });
        v.counterexample = CausalTeam(u_.fcs[f], rows_of(ms2));
        return v;
      }
    }
    return v;
  }

 private:
  Team make(const std::vector<Member>& ms) const {
    if (mode_ == Mode::GCT) return GeneralizedCausalTeam(sig_, ms);
    std::vector<Assignment> rows;
    for (const auto& m : ms) rows.push_back(m.assignment);
    return CausalTeam(ms.front().fc, rows);
  }

  bool fails(const Team& t) {
    if (!concl_res_) return !mc_.check(t, concl_);
    for (const auto& a : *concl_res_)
      if (mc_.check(t, a)) return false;
    return true;
  }

  // Over one pool of candidate members: for each choice of resolutions, the
  // members satisfying all of them form the largest team satisfying the
  // premises under that choice.
  std::optional<std::vector<Member>> search(const std::vector<Member>& pool, Verdict& v) {
    if (pool.empty()) {
      v.teams_checked++;
      return std::nullopt;
    }
    std::vector<std::vector<std::vector<bool>>> sat(pres_.size());
    for (std::size_t i = 0; i < pres_.size(); ++i)
      for (const auto& g : pres_[i]) {
        std::vector<bool> row;
        for (const auto& m : pool) row.push_back(mc_.check_member(m, g));
        sat[i].push_back(std::move(row));
      }
    std::vector<std::size_t> choice(pres_.size(), 0);
    while (true) {
      std::vector<Member> team;
      for (std::size_t j = 0; j < pool.size(); ++j) {
        bool ok = true;
        for (std::size_t i = 0; i < pres_.size() && ok; ++i) ok = sat[i][choice[i]][j];
        if (ok) team.push_back(pool[j]);
      }
      v.teams_checked++;
      if (!team.empty() && fails(make(team))) return team;
      std::size_t i = pres_.size();
      while (i > 0) {
        if (++choice[i - 1] < pres_[i - 1].size()) break;
        choice[i - 1] = 0;
        --i;
      }
      if (i == 0) break;
    }
    return std::nullopt;
  }

  template <class Pred>
  void shrink(std::vector<Member>& ms, Pred still_fails) {
    for (std::size_t i = 0; i < ms.size();) {
      auto trial = ms;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
      if (!trial.empty() && still_fails(trial)) ms = std::move(trial);
      else ++i;
    }
  }

  SignaturePtr sig_;
  Mode mode_;
  const Universe& u_;
  std::vector<std::vector<Formula>> pres_;
  Formula concl_;
  std::optional<std::vector<Formula>> concl_res_;
  std::vector<Formula> premises_;
  ModelChecker mc_;
};

}  // namespace detail

// Whether every team satisfying all premises satisfies the conclusion.
inline Verdict entails(const std::vector<Formula>& premises, const Formula& conclusion,
                       const SignaturePtr& sig, Mode mode, const EntailOptions& opt = {},
                       const Universe* universe = nullptr) {
  for (const auto* f : {&conclusion}) {
    auto c = classify(*f);
    if (c.dialect == Dialect::IllFormed) throw Error("ill-formed formula: " + c.reason);
    check_signature(*f, *sig);
  }
  for (const auto& p : premises) {
    auto c = classify(p);
    if (c.dialect == Dialect::IllFormed) throw Error("ill-formed formula: " + c.reason);
    check_signature(p, *sig);
  }
  std::optional<Universe> local;
  if (!universe && fcs_enumerable(*sig)) universe = &local.emplace(build_universe(sig));
  bool exact_enum = mode == Mode::CT ? ct_enumeration_exact(*sig, opt.budget)
                                     : gct_enumeration_exact(*sig, opt.budget);
  Strategy s = opt.strategy;
  if (s == Strategy::Auto) s = exact_enum ? Strategy::Exhaustive : Strategy::MaximalTeams;
  if (s == Strategy::Exhaustive && !exact_enum) throw Error("universe exceeds the budget for exhaustive search");
  if (s == Strategy::MaximalTeams) {
    if (universe) {
      auto pres = detail::premise_resolutions(premises, *sig, opt.max_resolutions);
      if (pres) {
        std::optional<std::vector<Formula>> cres;
        try {
          cres = resolutions(desugar(conclusion, *sig, true), opt.max_resolutions);
        } catch (const Error&) {
        }
        try {
          detail::MaximalSearch ms(sig, mode, *universe, std::move(*pres), conclusion, std::move(cres), premises);
          return ms.run(opt.minimize);
        } catch (const Error&) {
          if (opt.strategy == Strategy::MaximalTeams) throw;
        }
      } else if (opt.strategy == Strategy::MaximalTeams) {
        throw Error("premises have too many resolutions for the maximal-team search");
      }
    } else if (opt.strategy == Strategy::MaximalTeams) {
      throw Error("signature too large for the maximal-team search");
    }
    s = Strategy::Sampled;
  }
  UniverseBudget b = opt.budget;
  if (s == Strategy::Sampled) b.max_sem_size = 0;
  detail::TeamSpace space(sig, mode, b, universe);
  return detail::scan(space, premises, conclusion, sig, mode, opt.jobs);
}

inline Verdict entails_ct(const std::vector<Formula>& premises, const Formula& conclusion,
                          const SignaturePtr& sig, const EntailOptions& opt = {},
                          const Universe* u = nullptr) {
  return entails(premises, conclusion, sig, Mode::CT, opt, u);
}

inline Verdict entails_gct(const std::vector<Formula>& premises, const Formula& conclusion,
                           const SignaturePtr& sig, const EntailOptions& opt = {},
                           const Universe* u = nullptr) {
  return entails(premises, conclusion, sig, Mode::GCT, opt, u);
}

inline Verdict equivalent(const Formula& a, const Formula& b, const SignaturePtr& sig, Mode mode,
                          const EntailOptions& opt = {}, const Universe* u = nullptr) {
  Verdict v = entails({a}, b, sig, mode, opt, u);
  if (!v.holds) return v;
  Verdict w = entails({b}, a, sig, mode, opt, u);
  w.exact = w.exact && v.exact;
  w.teams_checked += v.teams_checked;
  return w;
}

}  // namespace cteam
