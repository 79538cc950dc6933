#pragma once

#include <algorithm>
#include <variant>

#include "cteam/function_component.hpp"

namespace cteam {

template <class T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// A set of rows sharing one function component; rows are kept sorted and
// duplicate-free.
class CausalTeam {
 public:
  CausalTeam(FunctionComponent fc, std::vector<Assignment> rows)
      : fc_(std::move(fc)), rows_(std::move(rows)) {
    sort_unique(rows_);
    for (const auto& r : rows_) {
      validate(signature(), r);
      if (!compatible(r, fc_))
        throw Error("row " + format_assignment(signature(), r) +
                    " is not compatible with the function component");
    }
  }

  const Signature& signature() const { return fc_.signature(); }
  const SignaturePtr& signature_ptr() const { return fc_.signature_ptr(); }
  const FunctionComponent& fc() const { return fc_; }
  const std::vector<Assignment>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }
  std::size_t size() const { return rows_.size(); }

  friend bool operator==(const CausalTeam& a, const CausalTeam& b) {
    return a.fc_ == b.fc_ && a.rows_ == b.rows_;
  }
  friend std::strong_ordering operator<=>(const CausalTeam& a, const CausalTeam& b) {
    if (auto c = a.fc_ <=> b.fc_; c != 0) return c;
    return a.rows_ <=> b.rows_;
  }

 private:
  FunctionComponent fc_;
  std::vector<Assignment> rows_;
};

struct Member {
  Assignment assignment;
  FunctionComponent fc;

  friend bool operator==(const Member& a, const Member& b) {
    return a.assignment == b.assignment && a.fc == b.fc;
  }
  friend std::strong_ordering operator<=>(const Member& a, const Member& b) {
    if (auto c = a.assignment <=> b.assignment; c != 0) return c;
    return a.fc <=> b.fc;
  }
};

class GeneralizedCausalTeam {
 public:
  GeneralizedCausalTeam(SignaturePtr sig, std::vector<Member> members)
      : sig_(std::move(sig)), members_(std::move(members)) {
    sort_unique(members_);
    for (const auto& m : members_) {
      require_same(*sig_, m.fc.signature());
      validate(*sig_, m.assignment);
      if (!compatible(m.assignment, m.fc))
        throw Error("member " + format_assignment(*sig_, m.assignment) +
                    " is not compatible with its function component");
    }
  }

  const Signature& signature() const { return *sig_; }
  const SignaturePtr& signature_ptr() const { return sig_; }
  const std::vector<Member>& members() const { return members_; }
  bool empty() const { return members_.empty(); }
  std::size_t size() const { return members_.size(); }

  std::vector<Assignment> assignments() const {
    std::vector<Assignment> out;
    for (const auto& m : members_) out.push_back(m.assignment);
    sort_unique(out);
    return out;
  }

  friend bool operator==(const GeneralizedCausalTeam& a, const GeneralizedCausalTeam& b) {
    return a.members_ == b.members_;
  }

 private:
  SignaturePtr sig_;
  std::vector<Member> members_;
};

using Team = std::variant<CausalTeam, GeneralizedCausalTeam>;

inline CausalTeam intervene_ct(const CausalTeam& t, const EquationSeq& eq,
                               TopoPreference pref = TopoPreference::Low) {
  if (!eq_consistent(eq)) throw Error("intervention with inconsistent equations");
  FunctionComponent g = t.fc().without(eq_vars(eq));
  std::vector<Assignment> rows;
  for (const auto& s : t.rows()) rows.push_back(intervene_pair(s, t.fc(), eq, pref).first);
  return CausalTeam(std::move(g), std::move(rows));
}

inline GeneralizedCausalTeam intervene_gct(const GeneralizedCausalTeam& t, const EquationSeq& eq,
                                           TopoPreference pref = TopoPreference::Low) {
  if (!eq_consistent(eq)) throw Error("intervention with inconsistent equations");
  std::vector<Member> out;
  for (const auto& m : t.members()) {
    auto [s, f] = intervene_pair(m.assignment, m.fc, eq, pref);
    out.push_back({std::move(s), std::move(f)});
  }
  return GeneralizedCausalTeam(t.signature_ptr(), std::move(out));
}

inline bool ct_equivalent(const CausalTeam& s, const CausalTeam& t) {
  return fc_similar(s.fc(), t.fc()) && s.rows() == t.rows();
}

// Team component of the slice of t whose function components are ~ f.
inline std::vector<Assignment> slice_rows(const GeneralizedCausalTeam& t,
                                          const FunctionComponent& f) {
  std::vector<Assignment> out;
  for (const auto& m : t.members())
    if (fc_similar(m.fc, f)) out.push_back(m.assignment);
  sort_unique(out);
  return out;
}

inline bool gct_equivalent(const GeneralizedCausalTeam& s, const GeneralizedCausalTeam& t) {
  require_same(s.signature(), t.signature());
  for (const auto* team : {&s, &t})
    for (const auto& m : team->members())
      if (slice_rows(s, m.fc) != slice_rows(t, m.fc)) return false;
  return true;
}

// Union of teams with similar function components. The joint system keeps the
// non-constant mechanisms with the common parents; dropped parents are dummy.
inline CausalTeam ct_union(const CausalTeam& s, const CausalTeam& t) {
  if (!fc_similar(s.fc(), t.fc())) throw Error("union of teams with non-similar function components");
  const auto& f = s.fc();
  const auto& g = t.fc();
  auto ef = proper_endogenous(f);
  FunctionComponent::Slots slots(f.size());
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (!ef[v]) continue;
    const auto& mf = *f.mechanism(static_cast<VarId>(v));
    const auto& mg = *g.mechanism(static_cast<VarId>(v));
    Mechanism h;
    std::set_intersection(mf.parents.begin(), mf.parents.end(), mg.parents.begin(),
                          mg.parents.end(), std::back_inserter(h.parents));
    std::vector<ValId> vals(f.size(), 0);
    while (true) {
      h.table.push_back(f.eval(static_cast<VarId>(v), vals));
      std::size_t i = h.parents.size();
      while (i > 0) {
        auto p = h.parents[i - 1];
        if (++vals[p] < f.signature().range_size(p)) break;
        vals[p] = 0;
        --i;
      }
      if (i == 0) break;
    }
    slots[v] = std::move(h);
  }
  std::vector<Assignment> rows = s.rows();
  rows.insert(rows.end(), t.rows().begin(), t.rows().end());
  return CausalTeam(FunctionComponent(f.signature_ptr(), std::move(slots)), std::move(rows));
}

inline GeneralizedCausalTeam to_gct(const CausalTeam& t) {
  std::vector<Member> ms;
  for (const auto& r : t.rows()) ms.push_back({r, t.fc()});
  return GeneralizedCausalTeam(t.signature_ptr(), std::move(ms));
}

inline CausalTeam to_ct(const GeneralizedCausalTeam& t) {
  if (t.empty()) throw Error("empty generalized causal team has no causal counterpart");
  const auto& f = t.members().front().fc;
  std::vector<Assignment> rows;
  for (const auto& m : t.members()) {
    if (!(m.fc == f)) throw Error("generalized causal team has more than one function component");
    rows.push_back(m.assignment);
  }
  return CausalTeam(f, std::move(rows));
}

inline bool uniform(const GeneralizedCausalTeam& t) {
  for (const auto& m : t.members())
    if (!fc_similar(m.fc, t.members().front().fc)) return false;
  return true;
}

inline const Signature& team_signature(const Team& t) {
  return std::visit([](const auto& x) -> const Signature& { return x.signature(); }, t);
}

}  // namespace cteam
