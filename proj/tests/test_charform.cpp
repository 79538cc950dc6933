#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace cteam;

namespace {

struct TwoBinary : ::testing::Test {
  SignaturePtr sig = fixture::binary_sig(2);
  Universe u = build_universe(sig);
  ModelChecker mc{sig};
};

bool subset(const std::vector<Assignment>& a, const std::vector<Assignment>& b) {
  for (const auto& x : a)
    if (std::find(b.begin(), b.end(), x) == b.end()) return false;
  return true;
}

}  // namespace

TEST_F(TwoBinary, PhiIsCO) {
  for (const auto& f : u.fcs) {
    EXPECT_EQ(classify(phi_F(f)).dialect, Dialect::CO);
    EXPECT_EQ(classify(phi_F(f, PhiForm::Literal)).dialect, Dialect::CO);
  }
}

TEST(Phi, EmptySystemOverOneVariable) {
  auto sig = fixture::binary_sig(1);
  EXPECT_TRUE(same(phi_F(FunctionComponent::empty(sig)), xi(*sig, 0)));
}

TEST_F(TwoBinary, PhiHoldsIffSimilarOnCausalTeams) {
  for (const auto& g : u.fcs)
    for (const auto& f : u.fcs) {
      auto phi = phi_F(f);
      auto rows = oracle::compatible_rows(g);
      for (std::uint64_t m = 1; m < (std::uint64_t{1} << rows.size()); ++m)
        EXPECT_EQ(mc.check(CausalTeam(g, detail::pick_bits(rows, m)), phi), oracle::similar(f, g));
    }
}

TEST_F(TwoBinary, PhiHoldsIffAllMembersSimilar) {
  for (const auto& f : u.fcs) {
    auto phi = phi_F(f);
    for_each_gct_up_to(sig, u.sem, 2, [&](const GeneralizedCausalTeam& t) {
      bool want = true;
      for (const auto& m : t.members()) want = want && oracle::similar(m.fc, f);
      EXPECT_EQ(mc.check(t, phi), want);
      return true;
    });
  }
}

TEST_F(TwoBinary, ThetaIsRowSubsetTest) {
  auto all = fixture::all_cts(sig);
  CounterRng root(43);
  for (int i = 0; i < 400; ++i) {
    CounterRng rng = root.split(i);
    auto t = detail::pick_random(u.assignments, rng);
    auto theta = theta_T(*sig, t);
    EXPECT_EQ(classify(theta).dialect, Dialect::CO);
    const auto& s = all[rng.below(all.size())];
    std::vector<Assignment> rows;
    for (const auto& m : s) rows.push_back(m.assignment);
    EXPECT_EQ(oracle::sat(s, theta), subset(rows, t));
    if (!s.empty()) {
      CausalTeam st(s.front().fc, rows);
      EXPECT_EQ(mc.check(st, theta), subset(rows, t));
      EXPECT_TRUE(mc.check(st, theta_T(*sig, rows)));
    }
  }
  EXPECT_TRUE(same(theta_T(*sig, {}), bot()));
}

TEST_F(TwoBinary, ChiCardinalityLaw) {
  for (std::size_t k = 0; k <= 4; ++k) {
    auto cod = chi_k(k, *sig, Dialect::COD);
    auto coi = chi_k(k, *sig, Dialect::COi);
    EXPECT_EQ(classify(coi).dialect, k ? Dialect::COi : Dialect::CO);
    enum_causal_teams(sig, {}, [&](const CausalTeam& s) {
      bool want = s.size() <= k;
      EXPECT_EQ(mc.check(s, cod), want);
      EXPECT_EQ(mc.check(s, coi), want);
      return true;
    }, &u);
  }
  EXPECT_TRUE(same(chi_k(0, *sig), bot()));
}

TEST_F(TwoBinary, XiExcludesExtensionsOfT) {
  auto all = fixture::all_cts(sig);
  std::vector<CausalTeam> teams;
  enum_causal_teams(sig, {}, [&](const CausalTeam& t) { return teams.push_back(t), true; }, &u);
  std::size_t checked = 0;
  for (const auto& t : teams) {
    if (t.empty() || t.size() > 4) continue;
    auto xi = xi_T(t, u);
    auto xs = xi_star(t, u);
    EXPECT_TRUE(in_language(xi, Dialect::COD));
    EXPECT_EQ(classify(xi).dialect == Dialect::CO, t.size() == 1);
    for (const auto& s : all) {
      std::vector<Assignment> rows;
      for (const auto& m : s) rows.push_back(m.assignment);
      // Some R equivalent to T is a causal subteam of S.
      bool contains = !s.empty() && oracle::similar(s.front().fc, t.fc()) && subset(t.rows(), rows);
      EXPECT_EQ(oracle::sat(s, xi), !contains);
      ++checked;
    }
    CausalTeam self = t;
    EXPECT_FALSE(mc.check(self, xi));
    EXPECT_FALSE(mc.check(self, xs));
    EXPECT_TRUE(mc.check(CausalTeam(t.fc(), {}), xi));
  }
  EXPECT_GT(checked, 1000u);
  EXPECT_THROW(xi_T(CausalTeam(u.fcs[0], {}), u), Error);
}

TEST(XiStarMembers, ContainmentUpToSimilarity) {
  auto sig = fixture::binary_sig(1);
  auto u = build_universe(sig);
  ModelChecker mc(sig);
  for_each_gct_up_to(sig, u.sem, 2, [&](const GeneralizedCausalTeam& target) {
    if (target.empty()) return true;
    auto xi = xi_star_members(target.members(), u);
    for_each_gct_up_to(sig, u.sem, 4, [&](const GeneralizedCausalTeam& s) {
      bool contains = true;
      for (const auto& m : target.members()) {
        bool hit = false;
        for (const auto& k : s.members())
          hit = hit || (k.assignment == m.assignment && oracle::similar(k.fc, m.fc));
        contains = contains && hit;
      }
      EXPECT_EQ(mc.check(s, xi), !contains);
      return true;
    });
    return true;
  });
}

TEST_F(TwoBinary, UnfCharacterizesUniformity) {
  auto f = unf(u);
  EXPECT_EQ(classify(f).dialect, Dialect::COi);
  for_each_gct_up_to(sig, u.sem, 3, [&](const GeneralizedCausalTeam& t) {
    bool uni = true;
    for (const auto& a : t.members())
      for (const auto& b : t.members()) uni = uni && oracle::similar(a.fc, b.fc);
    EXPECT_EQ(mc.check(t, f), uni);
    return true;
  });
  enum_causal_teams(sig, {}, [&](const CausalTeam& t) {
    EXPECT_TRUE(mc.check(t, f));
    return true;
  }, &u);
}

TEST(OneFunNoMix, EquivalentToUnfOnGcts) {
  for (std::size_t n : {1, 2}) {
    auto sig = fixture::binary_sig(n);
    auto u = build_universe(sig);
    ModelChecker mc(sig);
    auto of = one_fun(*sig);
    auto nm = no_mix(u);
    auto uf = unf(u);
    EXPECT_EQ(classify(of).dialect, Dialect::COD);
    for_each_gct_up_to(sig, u.sem, n == 1 ? 4 : 2, [&](const GeneralizedCausalTeam& t) {
      EXPECT_EQ(mc.check(t, of) && mc.check(t, nm), mc.check(t, uf));
      return true;
    });
  }
}

TEST(DirectCause, SampleTeam) {
  auto e = fixture::sample();
  const auto& sig = *e.sig;
  EXPECT_EQ(classify(beta_dc(sig, e.X, e.Y)).dialect, Dialect::CO);
  EXPECT_TRUE(satisfies_ct(e.team, beta_dc(sig, e.X, e.Y)));
  EXPECT_FALSE(satisfies_ct(e.team, beta_dc(sig, e.Z, e.U)));
  EXPECT_TRUE(satisfies_ct(e.team, beta_en(sig, e.Z)));
  EXPECT_FALSE(satisfies_ct(e.team, beta_en(sig, e.U)));
  EXPECT_THROW(beta_dc(sig, e.X, e.X), Error);
}

TEST(Leadsto, SampleTeam) {
  auto e = fixture::sample();
  const auto& sig = *e.sig;
  EXPECT_EQ(classify(leadsto(sig, e.X, e.Y)).dialect, Dialect::CO);
  EXPECT_TRUE(satisfies_ct(e.team, leadsto(sig, e.X, e.Y)));
  EXPECT_TRUE(satisfies_ct(e.team, leadsto(sig, e.U, e.Z)));
  EXPECT_FALSE(satisfies_ct(e.team, leadsto(sig, e.Z, e.U)));
  EXPECT_THROW(leadsto(sig, e.X, e.X), Error);
  auto slots = e.fc.slots();
  slots[e.Y].reset();
  FunctionComponent g(e.sig, slots);
  CausalTeam t(g, {complete_assignment(g, e.row(0, 0, 1, 2))});
  EXPECT_FALSE(satisfies_ct(t, leadsto(sig, e.X, e.Y)));
}

TEST_F(TwoBinary, DefineFlatClasses) {
  auto top_class = close_flat(all_causal_teams(u), u);
  EXPECT_EQ(top_class.members.size(), 104u);
  auto phi = define_flat_class(top_class, u);
  EXPECT_EQ(classify(phi).dialect, Dialect::CO);
  EXPECT_EQ(defined_class(phi, u).members, top_class.members);

  CausalTeam seed(u.fcs[5], u.compatible[5]);
  auto k = close_flat({seed}, u);
  auto psi = define_flat_class(k, u);
  EXPECT_EQ(defined_class(psi, u).members, k.members);

  // Dropping a singleton breaks flatness.
  TeamClass broken = k;
  for (const auto& t : k.members)
    if (t.size() == 1) {
      broken.members.erase(t);
      break;
    }
  ASSERT_LT(broken.members.size(), k.members.size());
  EXPECT_THROW(define_flat_class(broken, u), DefinabilityError);
  EXPECT_THROW(define_flat_class(TeamClass{sig, {}}, u), Error);
}

TEST_F(TwoBinary, DefineDownwardClasses) {
  CausalTeam seed(u.fcs[7], u.compatible[7]);
  auto k = close_downward({seed}, u);
  auto phi = define_downward_class(k, u);
  EXPECT_EQ(classify(phi).dialect, Dialect::COD);
  EXPECT_EQ(defined_class(phi, u).members, k.members);
  auto phi_i = define_downward_class(k, u, Dialect::COi);
  EXPECT_EQ(classify(phi_i).dialect, Dialect::COi);
  EXPECT_EQ(defined_class(phi_i, u).members, k.members);

  auto empties = close_downward({}, u);
  EXPECT_EQ(empties.members.size(), u.fcs.size());
  auto chi0 = define_downward_class(empties, u);
  for (const auto& t : all_causal_teams(u)) EXPECT_EQ(mc.check(t, chi0), t.empty());

  TeamClass up = k;
  up.members.erase(CausalTeam(u.fcs[7], {}));
  try {
    define_downward_class(up, u);
    ADD_FAILURE() << "accepted a class without an empty-component team";
  } catch (const DefinabilityError& err) {
    EXPECT_TRUE(err.witness().empty());
  }
  TeamClass gap = k;
  gap.members.erase(CausalTeam(u.fcs[7], {u.compatible[7][0]}));
  EXPECT_THROW(define_downward_class(gap, u), DefinabilityError);
}
