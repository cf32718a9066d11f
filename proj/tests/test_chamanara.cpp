#include <gtest/gtest.h>

#include <numeric>

#include "oracles.hpp"

using namespace coverflow;

namespace {

Permutation P(const char* s, std::size_t d) { return Permutation::parse(s, d); }

Permutation random_in(const std::vector<Permutation>& g, Rng& rng) { return g[rng.below(g.size())]; }

}  // namespace

using oracle::expand;
using oracle::h_from_window;
using oracle::random_window;

TEST(FreeGroup, ReduceAndInverse) {
  Word w{{1, 1}, {2, 1}, {2, -1}, {3, -1}};
  EXPECT_EQ(reduce(w), (Word{{1, 1}, {3, -1}}));
  EXPECT_TRUE(reduce([&] {
                Word x = w;
                auto y = inverse(w);
                x.insert(x.end(), y.begin(), y.end());
                return x;
              }())
                  .empty());
}

TEST(FreeGroup, PhiActionExamples) {
  auto inv = phi_generator_action(PhiDirection::Inverse);
  auto fwd = phi_generator_action(PhiDirection::Forward);
  EXPECT_EQ(inv(0), (Word{{1, 1}}));
  EXPECT_EQ(inv(-3), (Word{{-2, 1}, {1, -1}}));
  EXPECT_EQ(inv(4), (Word{{1, 1}, {5, 1}}));
  EXPECT_EQ(fwd(1), (Word{{0, 1}}));
  EXPECT_EQ(fwd(0), (Word{{-1, 1}, {0, 1}}));
  EXPECT_EQ(fwd(3), (Word{{0, -1}, {2, 1}}));
}

TEST(FreeGroup, ForwardUndoesInverse) {
  auto inv = phi_generator_action(PhiDirection::Inverse);
  auto fwd = phi_generator_action(PhiDirection::Forward);
  for (std::int64_t n = -10; n <= 10; ++n) {
    EXPECT_EQ(substitute(substitute(letter(n), inv), fwd), letter(n)) << n;
    EXPECT_EQ(substitute(substitute(letter(n), fwd), inv), letter(n)) << n;
  }
}

TEST(GSequence, IndexingAndTails) {
  GSequence g(2, 3, {P("(1 2)", 2), Permutation::identity(2)}, TailRule::constant_of(P("(1 2)", 2)),
              TailRule::periodic({P("(1 2)", 2), Permutation::identity(2), Permutation::identity(2)}));
  EXPECT_EQ(g[3], P("(1 2)", 2));
  EXPECT_EQ(g[4], Permutation::identity(2));
  EXPECT_EQ(g[2], P("(1 2)", 2));
  EXPECT_EQ(g[-100], P("(1 2)", 2));
  EXPECT_EQ(g[5], P("(1 2)", 2));
  EXPECT_EQ(g[8], P("(1 2)", 2));
  EXPECT_EQ(g[9], Permutation::identity(2));
  EXPECT_THROW(GSequence(2, 0, {P("(1 2 3)", 3)}, TailRule::identity(2), TailRule::identity(2)), Error);
  EXPECT_THROW(TailRule::hlister({P("(1 2 3)", 3)}), Error);
}

TEST(GSequence, EvalExamples) {
  Rng rng(1, "eval_examples");
  auto g = random_window(3, rng, -4, 12);
  EXPECT_EQ(eval_cover_hom(g, 0, 1), g[0]);
  EXPECT_EQ(eval_cover_hom(g, 5, 0), g[4]);
  EXPECT_EQ(eval_cover_hom(g, 0, 3), g[0].inverse() * g[1].inverse() * g[2]);
  EXPECT_EQ(eval_cover_hom(g, 2, -2), g[-1] * g[0].inverse() * g[1].inverse());
}

TEST(GSequence, EvalMatchesFreeGroupExpansion) {
  Rng rng(2, "eval_oracle");
  for (int t = 0; t < 40; ++t) {
    std::size_t d = t % 2 ? 3 : 2;
    auto g = random_window(d, rng, -10, 26);
    auto h = [&](std::int64_t j) { return h_from_window(g, j); };
    for (int k = 0; k <= 6; ++k)
      for (std::int64_t n = -6; n <= 6; ++n)
        ASSERT_EQ(eval_cover_hom(g, k, n), evaluate(expand(n, k), h, d)) << "k=" << k << " n=" << n;
  }
}

TEST(GSequence, SequenceOfARepresentation) {
  // g_m = h(phi^{-m} gamma_1) computed symbolically, for m >= 0 and m < 0
  auto fwd = phi_generator_action(PhiDirection::Forward);
  Rng rng(4, "from_rep");
  auto S3 = elements(parse_group("S3", 3));
  for (int t = 0; t < 10; ++t) {
    std::map<std::int64_t, Permutation> vals;
    for (std::int64_t j = -20; j <= 20; ++j) vals.emplace(j, random_in(S3, rng));
    auto h = [&](std::int64_t j) { return vals.at(j); };
    std::vector<Permutation> window;
    for (std::int64_t m = -6; m <= 10; ++m) {
      Word w = letter(1);
      if (m >= 0) w = expand(1, static_cast<int>(m));
      for (std::int64_t i = 0; i < -m; ++i) w = substitute(w, fwd);
      window.push_back(evaluate(w, h, 3));
    }
    GSequence g(3, -6, window, TailRule::identity(3), TailRule::identity(3));
    for (int k = 0; k <= 3; ++k)
      for (std::int64_t n = -2; n <= 4; ++n) EXPECT_EQ(eval_cover_hom(g, k, n), evaluate(expand(n, k), h, 3));
  }
}

TEST(GSequence, ShiftConjugacy) {
  Rng rng(3, "shift");
  for (int t = 0; t < 10; ++t) {
    auto g = random_window(3, rng, -12, 30);
    EXPECT_EQ(shift(g, 0), g);
    EXPECT_EQ(shift(shift(g, 5), -5), g);
    for (std::int64_t k = -8; k <= 8; ++k)
      for (std::int64_t n = -8; n <= 8; ++n) EXPECT_EQ(eval_cover_hom(shift(g, 1), k, n), eval_cover_hom(g, k + 1, n));
  }
  auto h = elements(parse_group("S3", 3));
  GSequence s(3, 0, {}, TailRule::identity(3), TailRule::hlister(h));
  auto s6 = shift(s, -6);
  for (std::int64_t m = 6; m < 40; ++m) EXPECT_EQ(s6[m], s[m]);
}

TEST(PWord, Construction) {
  auto p = build_p_word(1, 1, {2, 2}, ZeroBlockRule{ZeroBlockRule::Kind::Terminal, 0});
  EXPECT_EQ(p.symbols(10), (std::vector<unsigned>{1, 0, 0, 2, 0, 0, 0, 0, 0, 0}));
  auto q = build_p_word(1, 1, {2, 2});  // continues with l_i = i
  EXPECT_EQ(q.symbols(14), (std::vector<unsigned>{1, 0, 0, 2, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0}));
  EXPECT_THROW(build_p_word(1, 1, {0}), Error);
  EXPECT_THROW(build_p_word(0, 1, {1}), Error);
  auto r = build_p_word(2, 3, {1, 1, 4}, ZeroBlockRule{ZeroBlockRule::Kind::Repeat, 2});
  auto s = r.symbols(200);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) EXPECT_NE(s[i] + s[i + 1], 3u);
}

TEST(Devious, Examples) {
  auto S2 = parse_group("S2", 2);
  auto g = build_devious(S2, SubgroupSpec::trivial(2), {P("(1 2)", 2)}, 1);
  auto chk = is_devious(g);
  ASSERT_TRUE(chk.devious);
  EXPECT_TRUE(chk.connected);
  EXPECT_EQ(chk.devious->H, (std::vector<Permutation>{Permutation::identity(2)}));
  EXPECT_EQ(chk.devious->K, g.window_end());

  auto empty = build_devious(S2, SubgroupSpec::trivial(2), {}, 1);
  EXPECT_FALSE(is_devious(empty).connected);
  EXPECT_THROW(build_devious(S2, SubgroupSpec::trivial(2), {}, 1, 0, 0, true), Error);
  EXPECT_THROW(build_devious(S2, S2, {}, 1), Error);

  auto S3 = elements(parse_group("S3", 3));
  GSequence full(3, 0, {}, TailRule::identity(3), TailRule::hlister(S3));
  EXPECT_FALSE(is_devious(full).devious);

  GSequence per(3, 0, {P("(2 3)", 3)}, TailRule::identity(3), TailRule::periodic({P("(1 2)", 3), P("(1 2)", 3)}));
  auto pc = is_devious(per);
  ASSERT_TRUE(pc.devious);
  EXPECT_EQ(pc.devious->H.size(), 2u);
  EXPECT_TRUE(pc.connected);
}

TEST(Devious, SkewModelIsCertifiedNonErgodic) {
  auto G = parse_group("S3", 3);
  auto H = parse_group("(1 2)", 3);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto g = build_devious(G, H, {}, seed, 5);
    auto K = is_devious(g).devious->K;
    for (std::int64_t k = K + 1; k < K + 8; ++k) {
      auto c = to_skew(g, k, 40);
      auto h = generated_subgroup(H.generators, 3);
      for (const auto& [i, p] : c.psi.assignments()) EXPECT_TRUE(std::binary_search(h.begin(), h.end(), p));
      EXPECT_GE(fiber_invariant_sets(c).size(), 2u);
    }
  }
}

TEST(ToSkew, FirstImageIsGk) {
  Rng rng(9, "to_skew");
  auto g = random_window(3, rng, -3, 10);
  EXPECT_EQ(to_skew(g, 0).psi.at(1), g[0]);
  EXPECT_EQ(to_skew(g, 2).psi.at(1), g[2]);
  auto t = to_skew(GSequence::trivial(2), 0);
  EXPECT_TRUE(t.psi.support().empty());
}

TEST(PReady, TwoTranspositions) {
  auto p = build_p_word(1, 1, {1, 2, 3});
  auto g = build_p_ready(p, parse_group("(1 2)", 4), parse_group("(3 4)", 4), parse_group("(1 2);(3 4);(1 3)(2 4)", 4), 7);
  for (std::int64_t n = 1; n < 200; ++n) {
    auto s = p(n);
    auto expect = s == 1 ? P("(1 2)", 4) : s == 2 ? P("(3 4)", 4) : Permutation::identity(4);
    EXPECT_EQ(g[n], expect) << n;
  }
  auto h1 = generated_subgroup({P("(1 2)", 4)}, 4), h2 = generated_subgroup({P("(3 4)", 4)}, 4);
  EXPECT_FALSE(verify_p_ready(g, p, h1, h2, 500));
  auto acc = accumulation_class(g);
  EXPECT_EQ(acc.kind, AccumulationClass::Kind::AllDisconnected);
  EXPECT_EQ(acc.subgroups, (std::vector<std::vector<Permutation>>{h1, h2}));
}

TEST(PReady, TransitiveUnionOfNonTransitiveSubgroups) {
  // H1 = <(1 2),(3 4)>, H2 = <(2 3)>: each non-transitive, together transitive on 4 points
  auto p = build_p_word(2, 1, {1, 1, 2});
  auto g = build_p_ready(p, parse_group("(1 2);(3 4)", 4), parse_group("(2 3)", 4), parse_group("S4", 4), 3);
  std::vector<Permutation> vals;
  for (std::int64_t n = 1; n < 60; ++n) vals.push_back(g[n]);
  EXPECT_TRUE(is_transitive(vals, 4).transitive);
  EXPECT_EQ(accumulation_class(g).kind, AccumulationClass::Kind::AllDisconnected);
}

TEST(PReady, Errors) {
  auto p = build_p_word(1, 1, {1});
  try {
    build_p_ready(p, parse_group("(1 2);(3 4)", 4), parse_group("(3 4)", 4), parse_group("S4", 4), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Infeasible);
    EXPECT_NE(std::string(e.what()).find("1-block"), std::string::npos);
  }
  EXPECT_THROW(build_p_ready(p, parse_group("(1 2)", 4), parse_group("(3 4)", 4), parse_group("(1 2)", 4), 1), Error);
}

TEST(PReady, VerifierCatchesViolations) {
  auto p = build_p_word(1, 1, {1, 1}, ZeroBlockRule{ZeroBlockRule::Kind::Terminal, 0});
  auto h1 = generated_subgroup({P("(1 2)", 4)}, 4), h2 = generated_subgroup({P("(3 4)", 4)}, 4);
  GSequence bad(4, 1, {P("(1 2)", 4), P("(1 2)", 4), P("(3 4)", 4), Permutation::identity(4)}, TailRule::identity(4),
                TailRule::identity(4));
  auto v = verify_p_ready(bad, p, h1, h2, 10);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->index, 2);
}

TEST(Accumulation, TailClasses) {
  EXPECT_EQ(accumulation_class(GSequence::trivial(2)).kind, AccumulationClass::Kind::AllDisconnected);
  auto S3 = elements(parse_group("S3", 3));
  GSequence full(3, 0, {}, TailRule::identity(3), TailRule::hlister(S3));
  EXPECT_EQ(accumulation_class(full).kind, AccumulationClass::Kind::HasConnectedLimit);
  auto p = build_p_word(1, 1, {1}, ZeroBlockRule{ZeroBlockRule::Kind::Repeat, 3});
  auto g = build_p_ready(p, parse_group("(1 2)", 3), parse_group("(2 3)", 3), parse_group("S3", 3), 1);
  // bounded zero blocks: the periodic tail generates S3
  EXPECT_EQ(accumulation_class(g).kind, AccumulationClass::Kind::HasConnectedLimit);
}
