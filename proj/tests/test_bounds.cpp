#include "szpiro/bounds.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace szpiro;
using T = Torsion;

namespace {

WeierstrassModel M(long a1, long a2, long a3, long a4, long a6) {
  return WeierstrassModel::from_integers(a1, a2, a3, a4, a6);
}

}  // namespace

TEST(Height, Examples) {
  EXPECT_EQ(naive_height(M(0, -1, -1, 0, 0)), 23104);
  EXPECT_EQ(naive_height(BigInt(16), BigInt(-152)), 152 * 152);
  EXPECT_EQ(naive_height(M(0, 0, 1, 0, 0)), 46656);
  // The height is taken on the minimal model.
  auto blown = transform(M(0, -1, -1, 0, 0), Isomorphism{BigRat(1, 2), 0, 0, 0});
  EXPECT_EQ(naive_height(blown), 23104);
}

TEST(Height, OrderThreeZeroFamily) {
  for (long a = 1; a <= 20; ++a) {
    if (!is_squarefree(a)) continue;
    auto inst = validate_params(T::C3_0, a, 0);
    BigInt expected = BigInt(216 * a * a) * (216 * a * a);
    EXPECT_EQ(naive_height(build_model(inst)), expected) << a;
  }
}

TEST(Ratio, Examples) {
  double expect_c5 = std::log(23104.0) / std::log(11.0);
  EXPECT_NEAR(szpiro_ratio(M(0, -1, -1, 0, 0)), expect_c5, 1e-12);
  EXPECT_NEAR(szpiro_ratio(M(0, -1, -1, 0, 0)), 4.1908, 1e-3);
  EXPECT_NEAR(szpiro_ratio(M(0, -1, 1, -10, -20)), 2 * std::log(20008.0) / std::log(11.0), 1e-12);
  EXPECT_NEAR(szpiro_ratio(M(0, -1, 1, -10, -20)), 8.2609, 1e-3);
  EXPECT_THROW(szpiro_ratio(BigInt(5), BigInt(1)), std::domain_error);
}

TEST(Ratio, AlwaysAboveOne) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> d(-25, 25);
  for (int i = 0; i < 300; ++i) {
    auto m = M(d(rng), d(rng), d(rng), d(rng), d(rng));
    if (compute_invariants(m).delta == 0) continue;
    auto s = analyze(m);
    BigInt h = naive_height(s.invariants.c4, s.invariants.c6);
    EXPECT_TRUE(exceeds(h, s.conductor, SzpiroExponent{1, 1})) << to_string(m);
  }
}

TEST(Exceeds, Examples) {
  EXPECT_TRUE(exceeds(BigInt(23104), BigInt(11), SzpiroExponent{3, 1}));
  EXPECT_TRUE(exceeds(M(0, -1, -1, 0, 0), SzpiroExponent{3, 1}));
  EXPECT_TRUE(exceeds(BigInt(46656), BigInt(27), SzpiroExponent{2, 1}));
  // Equality is not an excess: 8^1 vs 2^3.
  EXPECT_FALSE(exceeds(BigInt(8), BigInt(2), SzpiroExponent{3, 1}));
  EXPECT_TRUE(exceeds(BigInt(9), BigInt(2), SzpiroExponent{3, 1}));
  // height^2 > N^3: 9^2 = 81 > 64 = 4^3
  EXPECT_TRUE(exceeds(BigInt(9), BigInt(4), SzpiroExponent{3, 2}));
  EXPECT_FALSE(exceeds(BigInt(8), BigInt(4), SzpiroExponent{3, 2}));
}

TEST(Quality, Examples) {
  EXPECT_DOUBLE_EQ(abc_quality(1, 1, 2), 1.0);
  EXPECT_NEAR(abc_quality(1, 8, 9), std::log(9.0) / std::log(6.0), 1e-12);
  EXPECT_NEAR(abc_quality(1, 8, 9), 1.2263, 1e-4);
  EXPECT_NEAR(abc_quality(1, 2, 3), 0.6131, 1e-4);
  EXPECT_THROW(abc_quality(2, 4, 6), std::invalid_argument);
  EXPECT_THROW(abc_quality(1, 2, 4), std::invalid_argument);
}

TEST(Phi, ValueAtZero) {
  auto v = phi_eval(make_phi_spec(T::C5, "1"), 0);
  EXPECT_EQ(v.sign, 1);
  EXPECT_NEAR(v.approx, 1.0, 1e-15);
}

TEST(Phi, SpecsCoverEveryBranch) {
  auto specs = all_phi_specs();
  EXPECT_EQ(specs.size(), 28u);
  EXPECT_EQ(make_phi_spec(T::C4, "2c").v, 2);
  EXPECT_EQ(make_phi_spec(T::C4, "c").v, 1);
  EXPECT_THROW(make_phi_spec(T::C5, "2"), ContractViolation);
}

TEST(Phi, ExactSignMatchesDirectEvaluation) {
  // Recompute phi from the family model at a few points and compare signs.
  for (const auto& spec : all_phi_specs()) {
    const auto& tr = traits(spec.id);
    for (long k : {-37L, -5L, 0L, 3L, 41L}) {
      BigRat x(k, 7);
      x.canonicalize();
      auto slots = spec.slots_at(x);
      auto inv = compute_invariants(family_model(spec.id, slots));
      BigRat delta = abs(branch(spec.id, spec.v).delta_factor * delta_base(spec.id, slots));
      BigRat lhs = spec.height_factor() * std::max<BigRat>(BigRat(abs(inv.c4 * inv.c4 * inv.c4)), BigRat(inv.c6 * inv.c6));
      BigRat L = rpow(lhs, tr.l.q), R = rpow(delta, tr.l.p);
      int expect = L > R ? 1 : (L == R ? 0 : -1);
      EXPECT_EQ(phi_eval(spec, x).sign, expect) << spec.describe() << " x=" << to_string(x);
    }
  }
}

TEST(Phi, DocumentedGrids) {
  for (auto [t, u] : {std::pair{T::C5, "1"}, std::pair{T::C2, "1"}}) {
    auto r = phi_scan(make_phi_spec(t, u), 64, 20, 2);
    EXPECT_EQ(r.points, 2561u);
    EXPECT_TRUE(r.violations.empty());
  }
  auto fine = phi_scan(make_phi_spec(T::C2xC4, "2"), 1024, 2, 2);
  EXPECT_TRUE(fine.violations.empty());
  EXPECT_TRUE(fine.zeros.empty());
  EXPECT_GT(fine.min_value, 0.0);
  EXPECT_NEAR(fine.argmin.get_d(), (1 - std::sqrt(5.0)) / 8, 2e-3);
}

TEST(Phi, TailDominanceForAllPairs) {
  for (const auto& spec : all_phi_specs()) EXPECT_TRUE(phi_tail(spec).dominates) << spec.describe();
}

TEST(Homogeneity, Examples) {
  EXPECT_TRUE(homogeneity_check(validate_params(T::C5, 2, 3)).ok());
  EXPECT_TRUE(homogeneity_check(validate_params(T::C2, 3, 2, BigInt(5))).ok());
  EXPECT_TRUE(homogeneity_check(validate_params(T::C3, 24 * 25, 7)).ok());
  EXPECT_THROW(homogeneity_check(validate_params(T::C3_0, 2, 0)), std::invalid_argument);
}

TEST(Homogeneity, RandomTuples) {
  std::mt19937_64 rng(2718);
  std::uniform_int_distribution<long> d(-500, 500);
  for (T t : parameterized_families()) {
    if (t == T::C3_0) continue;
    int done = 0;
    while (done < 20) {
      try {
        auto inst = validate_params(t, d(rng), d(rng), BigInt(d(rng)));
        if (inst.a == 0) continue;
        EXPECT_TRUE(homogeneity_check(inst).ok()) << inst.describe();
        ++done;
      } catch (const InvalidParameters&) {
      }
    }
  }
}

TEST(HeightBound, SmallSweep) {
  for (T t : parameterized_families())
    for (const auto& inst : enumerate_instances(t, 5, 40)) {
      auto r = verify_height_bound(inst);
      EXPECT_TRUE(r.ok) << inst.describe();
    }
  auto c5 = verify_height_bound(validate_params(T::C5, 1, 1));
  EXPECT_EQ(c5.height, 23104);
  EXPECT_EQ(c5.delta, 11);
}
