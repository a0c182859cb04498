#include "szpiro/reduction.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace szpiro;

namespace {

WeierstrassModel M(long a1, long a2, long a3, long a4, long a6) {
  return WeierstrassModel::from_integers(a1, a2, a3, a4, a6);
}

// Reference conductors of well-known curves (Cremona labels in comments).
struct KnownCurve {
  std::array<long, 5> a;
  long conductor;
};

const KnownCurve kKnown[] = {
    {{0, -1, 1, -10, -20}, 11},  // 11a1
    {{0, 0, 1, -1, 0}, 37},      // 37a1
    {{0, 0, 0, 0, 1}, 36},       // 36a1
    {{0, 0, 1, 0, 0}, 27},       // 27a3
    {{1, 0, 1, 4, -6}, 14},      // 14a1
};

}  // namespace

TEST(MinimalModel, AlreadyMinimal) {
  auto r = minimal_model(M(1, 0, 1, 0, 0));
  EXPECT_EQ(r.scaling_u, 1);
  EXPECT_EQ(r.delta_min, -26);
  auto c5 = minimal_model(M(0, -1, -1, 0, 0));
  EXPECT_EQ(c5.scaling_u, 1);
  EXPECT_EQ(c5.delta_min, -11);
}

TEST(MinimalModel, RecoversScaling) {
  auto base = M(1, 0, 1, 0, 0);
  auto blown = transform(base, Isomorphism{BigRat(1, 2), 0, 0, 0});
  auto r = minimal_model(blown);
  EXPECT_EQ(r.scaling_u, 2);
  EXPECT_EQ(r.delta_min, -26);
  EXPECT_EQ(transform(blown, r.iso), r.minimal);
}

TEST(MinimalModel, RandomBlowUpsAndShifts) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<long> d(-20, 20);
  int done = 0;
  while (done < 60) {
    auto m = M(d(rng), d(rng), d(rng), d(rng), d(rng));
    if (compute_invariants(m).delta == 0) continue;
    auto ref = minimal_model(m);
    long u = 1 + static_cast<long>(rng() % 6);
    Isomorphism f{BigRat(1, u), d(rng), d(rng), d(rng)};
    f.u.canonicalize();
    auto blown = transform(m, f);
    auto r = minimal_model(blown);
    EXPECT_TRUE(r.minimal.is_integral());
    EXPECT_EQ(r.delta_min, ref.delta_min);
    EXPECT_EQ(r.minimal, ref.minimal);
    EXPECT_EQ(transform(blown, r.iso), r.minimal);
    auto a = r.minimal.integer_coefficients();
    EXPECT_TRUE(a[0] == 0 || a[0] == 1);
    EXPECT_TRUE(a[2] == 0 || a[2] == 1);
    EXPECT_TRUE(a[1] >= -1 && a[1] <= 1);
    ++done;
  }
}

TEST(MinimalModel, RationalInput) {
  WeierstrassModel m{0, 0, 0, BigRat(-1, 16), BigRat(1, 64)};
  auto r = minimal_model(m);
  EXPECT_TRUE(r.minimal.is_integral());
  EXPECT_EQ(transform(m, r.iso), r.minimal);
}

TEST(MinimalModel, SingularThrows) { EXPECT_THROW(minimal_model(M(0, 0, 0, 0, 0)), SingularModel); }

TEST(Kraus, Criterion) {
  auto inv = compute_invariants(M(0, -1, 1, -10, -20));
  EXPECT_TRUE(kraus_integral(inv.c4.get_num(), inv.c6.get_num()));
  EXPECT_FALSE(kraus_integral(1, 1));
}

TEST(Tate, LocalExponents) {
  EXPECT_EQ(tate_local(M(0, -1, 1, -10, -20), 11).fp, 1u);
  EXPECT_EQ(tate_local(M(0, -1, 1, -10, -20), 11).kodaira, "I5");
  EXPECT_EQ(tate_local(M(1, 0, 1, 0, 0), 13).fp, 1u);
  EXPECT_EQ(tate_local(M(0, 0, 0, 0, 1), 3).fp, 2u);
  EXPECT_EQ(tate_local(M(0, 0, 0, 0, 1), 2).fp, 2u);
}

TEST(Conductor, KnownCurves) {
  for (const auto& k : kKnown) {
    auto m = M(k.a[0], k.a[1], k.a[2], k.a[3], k.a[4]);
    EXPECT_EQ(conductor(m), k.conductor) << to_string(m);
  }
  EXPECT_EQ(conductor(M(1, 0, 1, 0, 0)), 26);
  EXPECT_EQ(conductor(M(0, -1, -1, 0, 0)), 11);
}

TEST(Conductor, MultiplicativePrimesAgreeWithPointCounts) {
  // At p >= 5 a bad prime contributes 1 exactly when the reduction is a node,
  // and 2 when it is a cusp. The point count mod p tells the two apart.
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> d(-15, 15);
  int checked = 0;
  while (checked < 150) {
    auto m = M(d(rng), d(rng), d(rng), d(rng), d(rng));
    if (compute_invariants(m).delta == 0) continue;
    auto s = analyze(m);
    auto a = s.min.minimal.integer_coefficients();
    for (const auto& l : s.local) {
      if (l.p < 5 || l.p > 400) continue;
      long p = l.p.get_si();
      auto red = oracle::reduction_by_count(a, p);
      ASSERT_NE(red, oracle::Reduction::Good);
      EXPECT_EQ(l.fp, red == oracle::Reduction::Multiplicative ? 1u : 2u) << to_string(m) << " p=" << p;
      EXPECT_EQ(l.semistable, red == oracle::Reduction::Multiplicative);
      ++checked;
    }
  }
}

TEST(Conductor, DividesMinimalDiscriminantPrimes) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> d(-30, 30);
  for (int i = 0; i < 200; ++i) {
    auto m = M(d(rng), d(rng), d(rng), d(rng), d(rng));
    if (compute_invariants(m).delta == 0) continue;
    auto s = analyze(m);
    EXPECT_EQ(radical(s.conductor), radical(s.min.delta_min));
    for (const auto& l : s.local) {
      EXPECT_LE(l.fp, l.vp_delta);
      unsigned cap = l.p == 2 ? 8u : (l.p == 3 ? 5u : 2u);
      EXPECT_LE(l.fp, cap);
    }
  }
}

TEST(Semistability, Examples) {
  for (const auto& e : semistability_report(M(0, 0, 0, 0, 1))) EXPECT_FALSE(e.semistable) << e.p;
  auto c5 = semistability_report(M(0, -1, -1, 0, 0));
  ASSERT_EQ(c5.size(), 1u);
  EXPECT_EQ(c5[0].p, 11);
  EXPECT_TRUE(c5[0].semistable);
  EXPECT_TRUE(analyze(M(0, -1, 1, -10, -20)).semistable());
  EXPECT_FALSE(analyze(M(0, 0, 0, 0, 1)).semistable());
}
