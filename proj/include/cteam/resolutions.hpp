#pragma once

#include <unordered_map>

#include "cteam/formula.hpp"

namespace cteam {

namespace detail {

inline void push_unique(std::vector<Formula>& out, const Formula& f) {
  for (const auto& g : out)
    if (same(g, f)) return;
  out.push_back(f);
}

inline std::vector<Formula> resolutions_rec(const Formula& f, std::size_t limit,
                                            std::unordered_map<const Node*, std::vector<Formula>>& memo) {
  if (auto it = memo.find(f.get()); it != memo.end()) return it->second;
  std::vector<Formula> out;
  if (!f->has_idisj) {
    if (f->has_dep) throw Error("resolutions: dependence atoms must be translated first");
    out.push_back(f);
  } else {
    auto rec = [&](const Formula& g) { return resolutions_rec(g, limit, memo); };
    switch (f->kind) {
      case Kind::IntDisj:
        for (const auto& g : rec(f->a)) push_unique(out, g);
        for (const auto& g : rec(f->b)) push_unique(out, g);
        break;
      case Kind::And:
      case Kind::Or:
      case Kind::SelImp: {
        auto ra = rec(f->a);
        auto rb = rec(f->b);
        if (ra.size() * rb.size() > limit) throw Error("resolutions: too many resolutions");
        for (const auto& x : ra)
          for (const auto& y : rb) push_unique(out, binary(f->kind, x, y));
        break;
      }
      case Kind::Cf:
        for (const auto& g : rec(f->a)) push_unique(out, cf(f->antecedent, g));
        break;
      default:
        throw Error("resolutions: ill-formed formula");
    }
  }
  if (out.size() > limit) throw Error("resolutions: too many resolutions");
  memo.emplace(f.get(), out);
  return out;
}

}  // namespace detail

// CO formulas whose intuitionistic disjunction is equivalent to f, in order
// of first occurrence.
inline std::vector<Formula> resolutions(const Formula& f, std::size_t limit = 1'000'000) {
  auto c = classify(f);
  if (c.dialect == Dialect::IllFormed) throw Error("resolutions: ill-formed formula: " + c.reason);
  if (c.dialect == Dialect::COD) throw Error("resolutions: dependence atoms must be translated first");
  std::unordered_map<const Node*, std::vector<Formula>> memo;
  return detail::resolutions_rec(f, limit, memo);
}

inline Formula resolution_disjunction(const Formula& f) { return big_idisj(resolutions(f)); }

}  // namespace cteam
