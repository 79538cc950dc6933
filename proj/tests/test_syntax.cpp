#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace cteam;

namespace {

struct Sig22 : ::testing::Test {
  fixture::Sample e = fixture::sample();
  const Signature& sig = *e.sig;
};

}  // namespace

TEST_F(Sig22, ParsesExampleFormulas) {
  auto f = parse("X=1 -> Y=2", sig);
  EXPECT_TRUE(same(f, cf({{e.X, 1}}, eq(e.Y, 1))));
  auto g = parse("Y!=2 \\/ Y=2", sig);
  EXPECT_TRUE(same(g, disj(neg(eq(e.Y, 1)), eq(e.Y, 1))));
  auto h = parse("=(Y;Z)", sig);
  EXPECT_TRUE(same(h, dep({e.Y}, e.Z)));
  EXPECT_TRUE(same(parse("=(Y)", sig), con(e.Y)));
  EXPECT_TRUE(same(parse("=(U,X;Z)", sig), dep({e.U, e.X}, e.Z)));
}

TEST_F(Sig22, Precedence) {
  // -> lowest, then =>, \\/, \/, /\, ~.
  auto f = parse("X=1 /\\ U=0 -> Y=2 \\/ Y=1 /\\ Z=2", sig);
  ASSERT_EQ(f->kind, Kind::Cf);
  EXPECT_EQ(f->antecedent, (EquationSeq{{e.X, 1}, {e.U, 0}}));
  EXPECT_EQ(f->a->kind, Kind::Or);
  EXPECT_EQ(f->a->b->kind, Kind::And);
  auto g = parse("X=0 => Y=1 \\\\/ Y=2", sig);
  EXPECT_EQ(g->kind, Kind::SelImp);
  EXPECT_EQ(g->b->kind, Kind::IntDisj);
  auto h = parse("X=0 -> U=1 -> Z=2", sig);
  ASSERT_EQ(h->kind, Kind::Cf);
  EXPECT_EQ(h->a->kind, Kind::Cf);
  auto k = parse("~(X=0 \\/ X=1) /\\ _|_", sig);
  EXPECT_EQ(k->kind, Kind::And);
  EXPECT_EQ(k->a->kind, Kind::Neg);
  EXPECT_EQ(k->b->kind, Kind::Bot);
}

TEST_F(Sig22, Errors) {
  auto fails_at = [&](const std::string& text, std::size_t pos) {
    try {
      parse(text, sig);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const ParseError& err) {
      EXPECT_EQ(err.position(), pos) << text << ": " << err.what();
    }
  };
  fails_at("W=1", 0);
  fails_at("X=7", 2);
  fails_at("X=1 -> ", 7);
  fails_at("X=1 & Y=2", 4);
  fails_at("~=(Y;Z)", 0);
  fails_at("=(Y) \\\\/ X=1", 5);
  fails_at("(X=1 \\/ Y=2) -> Z=2", 0);
}

TEST_F(Sig22, EquationSequences) {
  EXPECT_TRUE(eq_consistent({{e.X, 1}}));
  EXPECT_TRUE(eq_consistent({{e.X, 1}, {e.X, 1}}));
  EXPECT_FALSE(eq_consistent({{e.X, 0}, {e.X, 1}}));
  EXPECT_EQ(parse_equations("X=1 /\\ U=0", sig), (EquationSeq{{e.X, 1}, {e.U, 0}}));
  EXPECT_EQ(render_equations({{e.U, 0}, {e.X, 1}, {e.U, 0}}, sig), "U=0 /\\ X=1 /\\ U=0");
}

TEST_F(Sig22, Classify) {
  EXPECT_EQ(classify(eq(e.X, 0)).dialect, Dialect::CO);
  EXPECT_EQ(classify(dep({e.Y}, e.Z)).dialect, Dialect::COD);
  EXPECT_EQ(classify(idisj(eq(e.X, 0), eq(e.X, 1))).dialect, Dialect::COi);
  auto bad = conj(eq(e.U, 0), neg(idisj(eq(e.X, 0), eq(e.X, 1))));
  auto c = classify(bad);
  EXPECT_EQ(c.dialect, Dialect::IllFormed);
  EXPECT_EQ(c.path, Path{1});
  EXPECT_EQ(classify(selimp(con(e.X), eq(e.Y, 0))).dialect, Dialect::IllFormed);
  EXPECT_EQ(classify(conj(con(e.X), idisj(eq(e.X, 0), eq(e.X, 1)))).dialect, Dialect::IllFormed);
  EXPECT_TRUE(in_language(eq(e.X, 0), Dialect::COD));
  EXPECT_FALSE(in_language(con(e.X), Dialect::COi));
}

TEST_F(Sig22, RenderFixedTokens) {
  EXPECT_EQ(render(bot(), sig), "_|_");
  EXPECT_EQ(render(cf({{e.X, 1}, {e.U, 0}}, eq(e.Y, 1)), sig), "X=1 /\\ U=0 -> Y=2");
  EXPECT_EQ(render(dep({e.Y}, e.Z), sig), "=(Y;Z)");
  EXPECT_EQ(render(neq(e.Y, 1), sig), "Y!=2");
}

TEST(Syntax, RenderParseRoundTrip) {
  CounterRng root(2024);
  int n = 0;
  for (int i = 0; i < 1000; ++i) {
    CounterRng rng = root.split(i);
    auto sig = i % 2 ? fixture::sample().sig : fixture::random_sig(rng);
    Dialect d = std::array{Dialect::CO, Dialect::COD, Dialect::COi}[i % 3];
    FormulaShape shape;
    shape.depth = 1 + static_cast<int>(rng.below(4));
    auto f = random_formula(*sig, rng, d, shape);
    ASSERT_NE(classify(f).dialect, Dialect::IllFormed);
    std::string text = render(f, *sig);
    Formula g;
    ASSERT_NO_THROW(g = parse(text, *sig)) << text;
    EXPECT_TRUE(same(f, g)) << text << " vs " << render(g, *sig);
    ++n;
  }
  EXPECT_EQ(n, 1000);
}

TEST(Syntax, DesugarShapes) {
  auto e = fixture::sample();
  const auto& sig = *e.sig;
  auto d = desugar(selimp(eq(e.X, 0), eq(e.Y, 0)), sig);
  EXPECT_TRUE(same(d, disj(neq(e.X, 0), eq(e.Y, 0))));
  EXPECT_TRUE(same(desugar(con(e.Y), sig, true), idisj(eq(e.Y, 0), eq(e.Y, 1))));
  auto yz = desugar(dep({e.Y}, e.Z), sig, true);
  EXPECT_EQ(classify(yz).dialect, Dialect::COi);
  EXPECT_EQ(chain_items(yz, Kind::Or).size(), 2u);
}

TEST(Syntax, DesugarPreservesSatisfactionAndClass) {
  CounterRng root(77);
  for (int i = 0; i < 200; ++i) {
    CounterRng rng = root.split(i);
    auto sig = fixture::random_sig(rng);
    Dialect d = i % 2 ? Dialect::COD : Dialect::COi;
    FormulaShape shape;
    shape.depth = 3;
    shape.allow_selimp = true;
    auto f = random_formula(*sig, rng, d, shape);
    auto plain = desugar(f, *sig);
    auto full = desugar(f, *sig, true);
    EXPECT_NE(classify(plain).dialect, Dialect::IllFormed);
    EXPECT_NE(classify(full).dialect, Dialect::IllFormed);
    auto ct = fixture::random_ct(sig, rng, 5);
    auto gct = fixture::random_gct(sig, rng, 5, 2);
    bool want_ct = oracle::sat(ct, f), want_g = oracle::sat(gct, f);
    EXPECT_EQ(satisfies_ct(ct, plain), want_ct);
    EXPECT_EQ(satisfies_ct(ct, full), want_ct);
    EXPECT_EQ(satisfies_gct(gct, plain), want_g);
    EXPECT_EQ(satisfies_gct(gct, full), want_g);
  }
}
