#pragma once

#include <map>
#include <unordered_map>

#include "cteam/syntax.hpp"
#include "cteam/team.hpp"

namespace cteam {

// Team satisfaction over causal and generalized causal teams. A causal team is
// evaluated as the member set {(s, F) | s in T-}; the clauses coincide. The
// checker keeps query-local memo tables and may be reused for many teams over
// one signature.
class ModelChecker {
 public:
  struct Point {
    std::uint64_t code;
    std::uint32_t fc;
    friend auto operator<=>(const Point&, const Point&) = default;
    friend bool operator==(const Point&, const Point&) = default;
  };
  using Members = std::vector<Point>;  // sorted, duplicate-free

  struct Split {
    Members left, right;
  };

  explicit ModelChecker(SignaturePtr sig) : sig_(std::move(sig)) {
    std::uint64_t stride = 1;
    strides_.assign(sig_->size(), 0);
    for (std::size_t i = sig_->size(); i-- > 0;) {
      strides_[i] = stride;
      stride *= sig_->range_size(static_cast<VarId>(i));
    }
  }

  const Signature& signature() const { return *sig_; }

  bool check(const CausalTeam& t, const Formula& f) { return eval_top(to_members(t), f); }
  bool check(const GeneralizedCausalTeam& t, const Formula& f) { return eval_top(to_members(t), f); }
  bool check(const Team& t, const Formula& f) {
    return std::visit([&](const auto& x) { return check(x, f); }, t);
  }

  // {(s, F)} satisfies f.
  bool check_member(const Member& m, const Formula& f) {
    prepare(f);
    return single(f.get(), point(m));
  }

  Members to_members(const CausalTeam& t) {
    require_same(*sig_, t.signature());
    std::uint32_t id = intern(t.fc());
    Members out;
    for (const auto& r : t.rows()) out.push_back({assignment_code(*sig_, r), id});
    return out;
  }
  Members to_members(const GeneralizedCausalTeam& t) {
    require_same(*sig_, t.signature());
    Members out;
    for (const auto& m : t.members()) out.push_back(point(m));
    sort_unique(out);
    return out;
  }
  Point point(const Member& m) { return {assignment_code(*sig_, m.assignment), intern(m.fc)}; }
  Member member(const Point& p) const { return {assignment_from_code(*sig_, p.code), fcs_[p.fc]}; }
  const FunctionComponent& fc(std::uint32_t id) const { return fcs_[id]; }

  bool eval_members(const Members& t, const Formula& f) { return eval_top(t, f); }

  // Witness for a top-level split disjunction that holds.
  std::optional<Split> split_witness(const Members& t, const Formula& f) {
    prepare(f);
    if (f->kind != Kind::Or) return std::nullopt;
    return find_split(f.get(), t);
  }

  void clear() {
    memo_.clear();
    single_memo_.clear();
  }

 private:
  struct MemoKey {
    const Node* node;
    Members team;
    friend bool operator==(const MemoKey&, const MemoKey&) = default;
  };
  struct MemoHash {
    std::size_t operator()(const MemoKey& k) const {
      std::uint64_t h = reinterpret_cast<std::uintptr_t>(k.node);
      for (const auto& p : k.team) h = detail::hmix(detail::hmix(h, p.code), p.fc);
      return static_cast<std::size_t>(h);
    }
  };
  struct SingleKey {
    const Node* node;
    Point p;
    friend bool operator==(const SingleKey&, const SingleKey&) = default;
  };
  struct SingleHash {
    std::size_t operator()(const SingleKey& k) const {
      return static_cast<std::size_t>(detail::hmix(
          detail::hmix(reinterpret_cast<std::uintptr_t>(k.node), k.p.code), k.p.fc));
    }
  };
  using ShiftKey = SingleKey;

  static constexpr std::size_t kMemoLimit = 2'000'000;
  static constexpr std::size_t kMaxSplitMembers = 26;

  void prepare(const Formula& f) {
    if (checked_.count(f.get())) return;
    auto c = classify(f);
    if (c.dialect == Dialect::IllFormed) throw Error("ill-formed formula: " + c.reason);
    check_signature(f, *sig_);
    checked_.emplace(f.get(), f);
    if (memo_.size() > kMemoLimit) memo_.clear();
    if (single_memo_.size() > kMemoLimit) single_memo_.clear();
    if (shift_memo_.size() > kMemoLimit) shift_memo_.clear();
  }

  bool eval_top(const Members& t, const Formula& f) {
    prepare(f);
    return eval(f.get(), t);
  }

  std::uint32_t intern(const FunctionComponent& f) {
    require_same(*sig_, f.signature());
    auto it = ids_.find(f);
    if (it != ids_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(fcs_.size());
    fcs_.push_back(f);
    ids_.emplace(f, id);
    return id;
  }

  ValId digit(std::uint64_t code, VarId v) const {
    return static_cast<ValId>(code / strides_[v] % sig_->range_size(v));
  }

  std::uint32_t intervened_fc(std::uint32_t id, const EquationSeq& eqs) {
    auto key = std::make_pair(id, eq_vars(eqs));
    auto it = intervened_.find(key);
    if (it != intervened_.end()) return it->second;
    std::uint32_t out = intern(fcs_[id].without(key.second));
    intervened_.emplace(std::move(key), out);
    return out;
  }

  // (s_{X=x}, F_{X=x}) for a consistent antecedent.
  Point shift(const Node* cfnode, const Point& p) {
    ShiftKey key{cfnode, p};
    if (auto it = shift_memo_.find(key); it != shift_memo_.end()) return it->second;
    std::uint32_t g = intervened_fc(p.fc, cfnode->antecedent);
    const auto& gf = fcs_[g];
    std::vector<ValId> vals = assignment_from_code(*sig_, p.code).values();
    for (auto e : cfnode->antecedent) vals[e.var] = e.val;
    for (auto v : gf.topological_order())
      if (gf.endogenous(v)) vals[v] = gf.eval(v, vals);
    Point out{assignment_code(*sig_, Assignment(std::move(vals))), g};
    shift_memo_.emplace(key, out);
    return out;
  }

  bool single(const Node* f, const Point& p) {
    SingleKey key{f, p};
    if (auto it = single_memo_.find(key); it != single_memo_.end()) return it->second;
    bool r = eval_clause(f, Members{p});
    single_memo_.emplace(key, r);
    return r;
  }

  bool eval(const Node* f, const Members& t) {
    if (t.size() == 1) return single(f, t.front());
    // Flatness of CO formulas.
    if (!f->has_dep && !f->has_idisj) {
      for (const auto& p : t)
        if (!single(f, p)) return false;
      return true;
    }
    if (t.size() <= 2 || f->kind == Kind::And || f->kind == Kind::IntDisj || f->kind == Kind::Eq)
      return eval_clause(f, t);
    MemoKey key{f, t};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool r = eval_clause(f, t);
    memo_.emplace(std::move(key), r);
    return r;
  }

  std::optional<Split> find_split(const Node* f, const Members& t) {
    const Node* a = f->a.get();
    const Node* b = f->b.get();
    bool a_flat = !a->has_dep && !a->has_idisj;
    bool b_flat = !b->has_dep && !b->has_idisj;
    // A flat side can take every member it accepts; the other side is
    // downward closed, so this choice is optimal.
    if (a_flat || b_flat) {
      const Node* flat = a_flat ? a : b;
      const Node* other = a_flat ? b : a;
      Split s;
      for (const auto& p : t) (single(flat, p) ? s.left : s.right).push_back(p);
      if (!eval(other, s.right)) return std::nullopt;
      if (!a_flat) std::swap(s.left, s.right);
      return s;
    }
    if (t.size() > kMaxSplitMembers) throw Error("team too large for split search");
    std::uint64_t n = std::uint64_t{1} << t.size();
    for (std::uint64_t mask = 0; mask < n; ++mask) {
      Split s;
      for (std::size_t i = 0; i < t.size(); ++i) (mask >> i & 1 ? s.left : s.right).push_back(t[i]);
      if (eval(a, s.left) && eval(b, s.right)) return s;
    }
    return std::nullopt;
  }

  bool eval_clause(const Node* f, const Members& t) {
    switch (f->kind) {
      case Kind::Eq:
        for (const auto& p : t)
          if (digit(p.code, f->var) != f->val) return false;
        return true;
      case Kind::Bot:
        return t.empty();
      case Kind::Top:
        return true;
      case Kind::Neg:
        for (const auto& p : t)
          if (single(f->a.get(), p)) return false;
        return true;
      case Kind::And:
        return eval(f->a.get(), t) && eval(f->b.get(), t);
      case Kind::IntDisj:
        return eval(f->a.get(), t) || eval(f->b.get(), t);
      case Kind::Or:
        return find_split(f, t).has_value();
      case Kind::Dep:
        for (std::size_t i = 0; i < t.size(); ++i)
          for (std::size_t j = i + 1; j < t.size(); ++j) {
            bool agree = true;
            for (auto x : f->dep_vars)
              if (digit(t[i].code, x) != digit(t[j].code, x)) {
                agree = false;
                break;
              }
            if (agree && digit(t[i].code, f->var) != digit(t[j].code, f->var)) return false;
          }
        return true;
      case Kind::Cf: {
        if (!eq_consistent(f->antecedent)) return true;
        Members u;
        for (const auto& p : t) u.push_back(shift(f, p));
        sort_unique(u);
        return eval(f->a.get(), u);
      }
      case Kind::SelImp: {
        Members u;
        for (const auto& p : t)
          if (single(f->a.get(), p)) u.push_back(p);
        return eval(f->b.get(), u);
      }
    }
    return false;
  }

  SignaturePtr sig_;
  std::vector<std::uint64_t> strides_;
  std::vector<FunctionComponent> fcs_;
  std::map<FunctionComponent, std::uint32_t> ids_;
  std::map<std::pair<std::uint32_t, std::vector<VarId>>, std::uint32_t> intervened_;
  std::unordered_map<const Node*, Formula> checked_;
  std::unordered_map<MemoKey, bool, MemoHash> memo_;
  std::unordered_map<SingleKey, bool, SingleHash> single_memo_;
  std::unordered_map<ShiftKey, Point, SingleHash> shift_memo_;
};

inline bool satisfies_ct(const CausalTeam& t, const Formula& f) {
  ModelChecker mc(t.signature_ptr());
  return mc.check(t, f);
}

inline bool satisfies_gct(const GeneralizedCausalTeam& t, const Formula& f) {
  ModelChecker mc(t.signature_ptr());
  return mc.check(t, f);
}

inline bool satisfies(const Team& t, const Formula& f) {
  return std::visit(
      [&](const auto& x) {
        ModelChecker mc(x.signature_ptr());
        return mc.check(x, f);
      },
      t);
}

}  // namespace cteam
