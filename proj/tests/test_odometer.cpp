#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"

using namespace coverflow;

namespace {

OdometerPoint pt(unsigned n, std::vector<unsigned> d) { return OdometerPoint(n, std::move(d)); }

Permutation P(const char* s, std::size_t d) { return Permutation::parse(s, d); }

// Decrement by borrowing; the oracle inverse of the odometer on nonzero points.
OdometerPoint decrement(OdometerPoint x) {
  for (auto& d : x.digits) {
    if (d > 0) {
      --d;
      x.trim();
      return x;
    }
    d = x.base - 1;
  }
  ADD_FAILURE() << "zero point has no predecessor";
  return x;
}

}  // namespace

TEST(Odometer, StepExamples) {
  EXPECT_EQ(odometer_step(pt(2, {1, 1, 0})), pt(2, {0, 0, 1}));
  EXPECT_EQ(odometer_step(pt(3, {2, 2})), pt(3, {0, 0, 1}));
  EXPECT_EQ(odometer_step(OdometerPoint::zero(2)), pt(2, {1}));
  EXPECT_EQ(pt(2, {1, 0, 0}), pt(2, {1}));
  EXPECT_THROW(pt(2, {2}), Error);
}

TEST(Odometer, StepMatchesIntegerIncrement) {
  for (unsigned n : {2u, 3u, 5u}) {
    OdometerPoint x = OdometerPoint::zero(n);
    for (std::uint64_t v = 0; v < 2000; ++v) {
      EXPECT_EQ(x, pt(n, oracle::digits_of(v, n, 12)));
      odometer_step_inplace(x);
    }
  }
}

TEST(Odometer, StepIsInvertibleOffZero) {
  Rng rng(3, "odometer_inverse");
  for (int t = 0; t < 500; ++t) {
    unsigned n = 2 + static_cast<unsigned>(rng.below(4));
    std::vector<unsigned> ds(1 + rng.below(10));
    for (auto& d : ds) d = static_cast<unsigned>(rng.below(n));
    OdometerPoint x(n, ds);
    if (!x.first_nonzero()) continue;
    EXPECT_EQ(odometer_step(decrement(x)), x);
  }
}

TEST(Odometer, CylindersVisitedOncePerPeriod) {
  for (unsigned n : {2u, 3u})
    for (std::size_t L = 1; L <= 6; ++L) {
      std::uint64_t period = 1;
      for (std::size_t i = 0; i < L; ++i) period *= n;
      // start from an arbitrary point
      OdometerPoint x = pt(n, oracle::digits_of(12345 % (period * n), n, L + 2));
      std::set<std::vector<unsigned>> seen;
      for (std::uint64_t t = 0; t < period; ++t) {
        std::vector<unsigned> head(L);
        for (std::size_t i = 0; i < L; ++i) head[i] = x.digit(i);
        EXPECT_TRUE(seen.insert(head).second);
        odometer_step_inplace(x);
      }
      EXPECT_EQ(seen.size(), period);
    }
}

TEST(Skew, StepExamples) {
  SkewCocycle c(2, MonodromyRep(2, {{1, P("(1 2)", 2)}}));
  auto s = skew_step(SkewState{pt(2, {1, 0}), 1}, c);
  EXPECT_EQ(s.point, pt(2, {0, 1}));
  EXPECT_EQ(s.fiber, 2u);

  SkewCocycle c2(2, MonodromyRep(2, {{1, P("(1 2)", 2)}, {2, Permutation::identity(2)}}));
  SkewState st{pt(2, {1}), 1};
  std::vector<std::uint32_t> fibers;
  for (int i = 0; i < 4; ++i) {
    fibers.push_back(st.fiber);
    st = skew_step(st, c2);
  }
  EXPECT_EQ(fibers, (std::vector<std::uint32_t>{1, 2, 2, 1}));
}

TEST(Skew, ZeroPointAppliesIdentity) {
  SkewCocycle c(2, MonodromyRep(2, {{1, P("(1 2)", 2)}}));
  auto s = skew_step(SkewState{OdometerPoint::zero(2), 1}, c);
  EXPECT_EQ(s.fiber, 1u);
  EXPECT_EQ(s.point, pt(2, {1}));
}

TEST(Skew, ProjectsToOdometer) {
  auto G = parse_group("S3", 3);
  Rng rng(8, "projection");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SkewCocycle c(3, sample_monodromy(G, {1, 2, 3, 4}, seed));
    SkewState s{OdometerPoint::zero(3), static_cast<std::uint32_t>(1 + rng.below(3))};
    for (int t = 0; t < 200; ++t) {
      auto next = skew_step(s, c);
      EXPECT_EQ(next.point, odometer_step(s.point));
      s = next;
    }
  }
}

TEST(Skew, RejectsNonPositiveIndices) {
  EXPECT_THROW(SkewCocycle(2, MonodromyRep(2, {{0, P("(1 2)", 2)}})), Error);
  EXPECT_THROW(SkewCocycle(1, MonodromyRep(2)), Error);
}

TEST(OrbitStatistics, PureOdometerIsExact) {
  SkewCocycle c(2, MonodromyRep(1));
  auto st = orbit_statistics(c, SkewState{OdometerPoint::zero(2), 1}, 8, 3);
  for (auto x : st.counts) EXPECT_EQ(x, 1u);
  EXPECT_EQ(st.deviation, 0.0);
}

TEST(OrbitStatistics, IdentityCocycleKeepsFiber) {
  SkewCocycle c(2, MonodromyRep(2));
  auto st = orbit_statistics(c, SkewState{OdometerPoint::zero(2), 1}, 1000, 3);
  for (std::uint64_t cyl = 0; cyl < 8; ++cyl) EXPECT_EQ(st.count(cyl, 2), 0u);
  EXPECT_DOUBLE_EQ(st.fiber_deviation, 0.5);
}

TEST(OrbitStatistics, NeverLeavesInvariantBlock) {
  auto G = parse_group("(1 2);(3 4)", 4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SkewCocycle c(2, sample_monodromy(G, {1, 2, 3, 4, 5}, seed));
    auto blocks = fiber_invariant_sets(c);
    ASSERT_GE(blocks.size(), 2u);
    for (std::uint32_t f0 = 1; f0 <= 4; ++f0) {
      auto st = orbit_statistics(c, SkewState{OdometerPoint::zero(2), f0}, 4096, 4);
      const auto& block = *std::find_if(blocks.begin(), blocks.end(), [&](const auto& b) {
        return std::find(b.begin(), b.end(), f0) != b.end();
      });
      for (std::uint64_t cyl = 0; cyl < 16; ++cyl)
        for (std::uint32_t f = 1; f <= 4; ++f)
          if (std::find(block.begin(), block.end(), f) == block.end()) { EXPECT_EQ(st.count(cyl, f), 0u); }
    }
  }
}

TEST(FiberInvariantSets, Examples) {
  EXPECT_EQ(fiber_invariant_sets(SkewCocycle(2, MonodromyRep(3))), (Partition{{1}, {2}, {3}}));
  EXPECT_EQ(fiber_invariant_sets(SkewCocycle(2, MonodromyRep(2, {{1, P("(1 2)", 2)}}))), (Partition{{1, 2}}));
  EXPECT_EQ(fiber_invariant_sets(SkewCocycle(2, MonodromyRep(4, {{1, P("(1 2)", 4)}, {3, P("(3 4)", 4)}}))),
            (Partition{{1, 2}, {3, 4}}));
}
