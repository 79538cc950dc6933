#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace cteam;

namespace {

Formula P(const std::string& s, const Signature& sig) { return parse(s, sig); }

Formula random_in(const Signature& sig, CounterRng& rng, Dialect d, int depth) {
  FormulaShape shape;
  shape.depth = depth;
  return random_formula(sig, rng, d, shape);
}

Formula random_any(const Signature& sig, CounterRng& rng, int depth) {
  Dialect d = std::array{Dialect::CO, Dialect::COD, Dialect::COi}[rng.below(3)];
  FormulaShape shape;
  shape.depth = depth;
  return random_formula(sig, rng, d, shape);
}

}  // namespace

TEST(Satisfaction, ExampleFacts) {
  auto e = fixture::sample();
  const auto& sig = *e.sig;
  auto tx = intervene_ct(e.team, {{e.X, 1}});
  EXPECT_TRUE(satisfies_ct(e.team, P("X=1 -> Y=2", sig)));
  EXPECT_TRUE(satisfies_ct(e.team, P("=(Y;Z)", sig)));
  EXPECT_FALSE(satisfies_ct(tx, P("=(Y;Z)", sig)));
  EXPECT_FALSE(satisfies_ct(e.team, P("X=1 -> =(Y;Z)", sig)));
  EXPECT_TRUE(satisfies_ct(e.team, P("Y!=2 \\/ Y=2", sig)));
  EXPECT_FALSE(satisfies_ct(e.team, P("Y!=2 \\\\/ Y=2", sig)));

  auto g = to_gct(e.team);
  for (const char* s : {"X=1 -> Y=2", "=(Y;Z)", "X=1 -> =(Y;Z)", "Y!=2 \\/ Y=2", "Y!=2 \\\\/ Y=2"})
    EXPECT_EQ(satisfies_gct(g, P(s, sig)), satisfies_ct(e.team, P(s, sig))) << s;
}

TEST(Satisfaction, Constants) {
  auto e = fixture::sample();
  EXPECT_TRUE(satisfies_ct(e.team, top()));
  EXPECT_FALSE(satisfies_ct(e.team, bot()));
  EXPECT_TRUE(satisfies_ct(CausalTeam(e.fc, {}), bot()));
  EXPECT_TRUE(satisfies_ct(e.team, P("X=0 /\\ X=1 -> _|_", *e.sig)));
}

TEST(Satisfaction, EmptyGctSatisfiesEverything) {
  auto sig = fixture::binary_sig(2);
  GeneralizedCausalTeam empty(sig, {});
  CounterRng root(1);
  for (int i = 0; i < 200; ++i) {
    CounterRng rng = root.split(i);
    EXPECT_TRUE(satisfies_gct(empty, random_any(*sig, rng, 3)));
  }
}

TEST(Satisfaction, AgreesWithNaiveOracle) {
  CounterRng root(31337);
  for (int i = 0; i < 1500; ++i) {
    CounterRng rng = root.split(i);
    auto sig = fixture::random_sig(rng);
    auto f = random_any(*sig, rng, 1 + static_cast<int>(rng.below(4)));
    auto ct = fixture::random_ct(sig, rng, 5);
    auto g = fixture::random_gct(sig, rng, 5, 3);
    EXPECT_EQ(satisfies_ct(ct, f), oracle::sat(ct, f)) << render(f, *sig);
    EXPECT_EQ(satisfies_gct(g, f), oracle::sat(g, f)) << render(f, *sig);
  }
}

TEST(Satisfaction, CtGctRoundTrip) {
  CounterRng root(28);
  for (int i = 0; i < 500; ++i) {
    CounterRng rng = root.split(i);
    auto sig = fixture::random_sig(rng);
    auto f = random_any(*sig, rng, 3);
    auto ct = fixture::random_ct(sig, rng, 5);
    EXPECT_EQ(satisfies_ct(ct, f), satisfies_gct(to_gct(ct), f));
    if (ct.empty()) continue;
    EXPECT_EQ(satisfies_gct(to_gct(ct), f), satisfies_ct(to_ct(to_gct(ct)), f));
  }
}

TEST(Satisfaction, ClosureUnderCausalEquivalence) {
  auto sig = fixture::binary_sig(2);
  auto u = build_universe(sig);
  CounterRng root(34);
  ModelChecker mc(sig);
  int pairs = 0;
  for (int i = 0; i < 300; ++i) {
    CounterRng rng = root.split(i);
    auto f = random_any(*sig, rng, 3);
    const auto& fc = u.fcs[rng.below(u.fcs.size())];
    auto rows = detail::pick_random(u.compatible[u.fc_index(fc)], rng);
    CausalTeam t(fc, rows);
    for (const auto& r : equivalents(t, u)) {
      ++pairs;
      EXPECT_EQ(mc.check(t, f), mc.check(r, f));
      // Swapping a member's fc within its class leaves gct satisfaction fixed.
      std::vector<Member> ms;
      for (std::size_t k = 0; k < rows.size(); ++k) ms.push_back({rows[k], k % 2 ? r.fc() : t.fc()});
      EXPECT_EQ(mc.check(GeneralizedCausalTeam(sig, ms), f), mc.check(to_gct(t), f));
    }
  }
  EXPECT_GT(pairs, 300);
}

TEST(Satisfaction, ClosureProperties) {
  CounterRng root(27);
  for (int i = 0; i < 400; ++i) {
    CounterRng rng = root.split(i);
    auto sig = fixture::random_sig(rng);
    auto f = random_any(*sig, rng, 3);
    auto g = fixture::random_gct(sig, rng, 6, 2);
    EXPECT_TRUE(satisfies_gct(GeneralizedCausalTeam(sig, {}), f));
    if (satisfies_gct(g, f)) {
      auto sub = detail::pick_random(g.members(), rng);
      EXPECT_TRUE(satisfies_gct(GeneralizedCausalTeam(sig, sub), f));
    }
    if (is_co(f)) {
      bool all = true;
      for (const auto& m : g.members()) all = all && satisfies_gct(GeneralizedCausalTeam(sig, {m}), f);
      EXPECT_EQ(all, satisfies_gct(g, f));
    }
  }
}

TEST(Satisfaction, SplitWitnessIsACover) {
  auto sig = fixture::binary_sig(2);
  CounterRng root(8);
  ModelChecker mc(sig);
  int found = 0;
  for (int i = 0; i < 300; ++i) {
    CounterRng rng = root.split(i);
    Dialect d = i % 2 ? Dialect::COD : Dialect::COi;
    auto f = disj(random_in(*sig, rng, d, 2), random_in(*sig, rng, d, 2));
    auto g = fixture::random_gct(sig, rng, 5, 2);
    auto ms = mc.to_members(g);
    auto w = mc.split_witness(ms, f);
    EXPECT_EQ(w.has_value(), mc.check(g, f));
    if (!w) continue;
    ++found;
    std::set<ModelChecker::Point> cover(w->left.begin(), w->left.end());
    cover.insert(w->right.begin(), w->right.end());
    EXPECT_EQ(cover, std::set<ModelChecker::Point>(ms.begin(), ms.end()));
    EXPECT_TRUE(mc.eval_members(w->left, f->a));
    EXPECT_TRUE(mc.eval_members(w->right, f->b));
  }
  EXPECT_GT(found, 50);
}

TEST(Satisfaction, MixedGctFailsPhi) {
  auto sig = fixture::binary_sig(2);
  auto u = build_universe(sig);
  ModelChecker mc(sig);
  for (std::size_t i = 0; i < u.fcs.size(); ++i)
    for (std::size_t j = 0; j < u.fcs.size(); ++j) {
      if (fc_similar(u.fcs[i], u.fcs[j])) continue;
      GeneralizedCausalTeam t(sig, {{u.compatible[i][0], u.fcs[i]}, {u.compatible[j][0], u.fcs[j]}});
      EXPECT_FALSE(mc.check(t, phi_F(u.fcs[i])));
    }
}

TEST(Satisfaction, IllFormedRejectedByParser) {
  auto e = fixture::sample();
  EXPECT_THROW(parse("~=(Y;Z)", *e.sig), ParseError);
}
