#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace coverflow;
using namespace coverflow::ladder;

namespace {

Z2Hom random_hom(Rng& rng, std::int64_t radius, double density = 0.3) {
  std::vector<std::int64_t> s;
  for (std::int64_t i = -radius; i <= radius; ++i)
    if (i != 0 && rng.uniform01() < density) s.push_back(i);
  return Z2Hom(std::move(s));
}

Z2Hom via_oracle(const Z2Hom& h, oracle::Dense (*f)(const oracle::Dense&)) {
  return f(oracle::Dense::of(h, h.radius() + 1)).to_hom();
}

}  // namespace

TEST(Z2Hom, Basics) {
  EXPECT_THROW(Z2Hom({0}), Error);
  EXPECT_THROW(Z2Hom({2, 2}), Error);
  Z2Hom h{3, -5};
  EXPECT_TRUE(h(3));
  EXPECT_FALSE(h(5));
  EXPECT_EQ(h.to_string(), "{-5,3}");
  EXPECT_EQ((h ^ Z2Hom{3}), Z2Hom{-5});
}

TEST(Ladder, GeneratorExamples) {
  EXPECT_EQ(rho_star(Z2Hom{3}), Z2Hom{-3});
  EXPECT_EQ(psi_star(Z2Hom{-2}), (Z2Hom{-2, 1, 2, 3}));
  EXPECT_EQ(tau_plus(Z2Hom{1}), Z2Hom{-1});
  EXPECT_EQ(tau_plus(Z2Hom{}), Z2Hom{});
  EXPECT_EQ(tau_star(Z2Hom{4, -2}, 0), (Z2Hom{4, -2}));
}

TEST(Ladder, ActionsMatchDenseOracle) {
  Rng rng(21, "ladder_oracle");
  for (int t = 0; t < 2000; ++t) {
    auto h = random_hom(rng, 1 + static_cast<std::int64_t>(rng.below(15)));
    EXPECT_EQ(psi_star(h), via_oracle(h, oracle::psi));
    EXPECT_EQ(rho_star(h), via_oracle(h, oracle::rho));
    EXPECT_EQ(tau_plus(h), via_oracle(h, oracle::tau));
    EXPECT_EQ(tau_minus(h), via_oracle(h, oracle::tau_inv));
  }
}

TEST(Ladder, InvolutionsAndInverses) {
  Rng rng(22, "ladder_identities");
  for (int t = 0; t < 1000; ++t) {
    auto h = random_hom(rng, 1 + static_cast<std::int64_t>(rng.below(20)));
    EXPECT_EQ(psi_star(psi_star(h)), h);
    EXPECT_EQ(rho_star(rho_star(h)), h);
    EXPECT_EQ(tau_minus(tau_plus(h)), h);
    EXPECT_EQ(tau_plus(tau_minus(h)), h);
    EXPECT_EQ(tau_plus(h), rho_star(psi_star(h)));
    std::int64_t m = rng.between(-5, 5);
    EXPECT_EQ(tau_star(tau_star(h, m), -m), h);
  }
}

TEST(Ladder, TauIsLinear) {
  Rng rng(23, "linearity");
  for (int t = 0; t < 500; ++t) {
    auto a = random_hom(rng, 12), b = random_hom(rng, 12);
    EXPECT_EQ(tau_plus(a ^ b), tau_plus(a) ^ tau_plus(b));
    EXPECT_EQ(psi_star(a ^ b), psi_star(a) ^ psi_star(b));
  }
}

TEST(Ladder, ProximityAndCylinders) {
  EXPECT_FALSE(proximity(Z2Hom{}));
  EXPECT_EQ(proximity(Z2Hom{3, -5}), 3u);
  EXPECT_EQ(proximity(Z2Hom{-1}), 1u);
  EXPECT_TRUE(cylinder_member(Z2Hom{2, -3}, 2));
  EXPECT_FALSE(cylinder_member(Z2Hom{2, -3, 1}, 2));
  EXPECT_FALSE(is_connected_double(Z2Hom{}));
  EXPECT_TRUE(is_connected_double(Z2Hom{1}));
  Rng rng(24, "cylinders");
  for (int t = 0; t < 2000; ++t) {
    auto h = random_hom(rng, 8, 0.2);
    for (std::int64_t k = 1; k <= 8; ++k) {
      bool in = cylinder_member(h, k);
      EXPECT_EQ(in, oracle::in_cylinder(oracle::Dense::of(h, 9), k));
      if (in) { EXPECT_EQ(proximity(h), static_cast<std::uint64_t>(k)); }
    }
  }
}

TEST(Ladder, CylinderLemmaExamples) {
  auto r1 = cylinder_lemma_check(Z2Hom{2, -3});
  EXPECT_TRUE(r1.passed);
  EXPECT_EQ(proximity(tau_plus(Z2Hom{2, -3})), 3u);
  auto r2 = cylinder_lemma_check(Z2Hom{3, -4});
  EXPECT_TRUE(r2.passed);
  EXPECT_TRUE(cylinder_member(tau_minus(Z2Hom{3, -4}), 2));
  auto r3 = cylinder_lemma_check(Z2Hom{2});
  EXPECT_FALSE(r3.in_cylinder);
  EXPECT_TRUE(r3.passed);
  EXPECT_THROW(cylinder_lemma_check(Z2Hom{1, 4}), Error);
}

TEST(Ladder, ZSolveExamples) {
  auto h0 = z_solve({2}, 2, 0);
  EXPECT_TRUE(h0(2));
  EXPECT_TRUE(cylinder_member(h0, 2));
  EXPECT_THROW(z_solve({}, 4, 3), Error);
  EXPECT_THROW(z_solve({1}, 4, 3), Error);
}

TEST(Ladder, ZSolveVerifiedByIteration) {
  Rng rng(25, "z_solve");
  for (int t = 0; t < 30; ++t) {
    std::vector<std::int64_t> f;
    while (f.empty())
      for (std::int64_t i = 2; i <= 8; ++i)
        if (rng.coin()) f.push_back(i);
    const unsigned M = static_cast<unsigned>(rng.below(12));
    auto h = z_solve(f, 8, M);
    for (std::int64_t i = 2; i <= 8; ++i) EXPECT_EQ(h(i), std::find(f.begin(), f.end(), i) != f.end());
    auto d = oracle::Dense::of(h, h.radius() + 2 * M + 4);
    for (unsigned m = 0; m <= M; ++m) {
      ASSERT_TRUE(oracle::in_cylinder(d, f.front() + m)) << "m=" << m;
      EXPECT_EQ(oracle::proximity(d), f.front() + static_cast<std::int64_t>(m));
      d = oracle::tau(d);
    }
  }
}

TEST(Ladder, LimitsToZero) {
  EXPECT_EQ(limits_to_zero(Z2Hom{}, 5).kind, LimitVerdict::Kind::ConvergesCertified);
  for (unsigned M : {3u, 10u, 25u}) {
    auto h = z_solve({2}, 2, M);
    auto v = limits_to_zero(h, M);
    EXPECT_EQ(v.kind, LimitVerdict::Kind::ConvergesCertified);
    EXPECT_EQ(v.m0, 0u);
    EXPECT_EQ(v.k, 2u);
  }
  auto e = limits_to_zero(Z2Hom{-1}, 20);
  EXPECT_EQ(e.kind, LimitVerdict::Kind::ProximityReturnedToOne);
  EXPECT_THROW(limits_to_zero(Z2Hom{1}, 0), Error);
}
