#include <gtest/gtest.h>

#include "endospin/spectrum.hpp"
#include "gen.hpp"
#include "oracles.hpp"

using namespace endospin;

namespace {
const HalfInt k32 = HalfInt::from_twice(3);
const HalfInt k12 = HalfInt::from_twice(1);
}  // namespace

TEST(Spectrum, TransitionFrequencyIndependentOfN) {
  SystemParams p;
  const double bz = 0.05, w = p.omega1(bz);
  for (int m = -10; m <= 10; ++m) {
    for (int tn = 3; tn > -3; tn -= 2) {
      const double diff = energy_diag({HalfInt::from_twice(tn), HalfInt(m)}, p, bz) -
                          energy_diag({HalfInt::from_twice(tn - 2), HalfInt(m)}, p, bz);
      EXPECT_NEAR(diff, -w + m * p.j_eff, 1e-14);
    }
    EXPECT_NEAR(transition_freq(HalfInt(m), w, p.j_eff), -w + m * p.j_eff, 1e-15);
  }
}

TEST(Spectrum, OuterDoubletCrossingField) {
  SystemParams p;
  const auto cp = find_crossing({k32, HalfInt(-10)}, {k32, HalfInt(10)}, p);
  EXPECT_NEAR(cp.bz_star, 0.019540, 5e-6);
  EXPECT_NEAR(cp.omega_star, 1.5 * p.j_eff, 1e-15);
  EXPECT_EQ(cp.order, CrossingOrder::first_order);
  EXPECT_FALSE(cp.negative_field);
  const double scan = oracle::crossing_scan(1.5, -10, 1.5, 10, p.d_axial, p.j_eff, 2.0, 0.0, 0.05);
  EXPECT_NEAR(cp.bz_star, scan, 1e-9);
}

TEST(SpectrumProperty, CrossingsAgreeWithGridScan) {
  gen::Rng rng(41);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    SystemParams p = gen::params(rng);
    p.g1 = p.g2;
    const StateLabel a = gen::state(rng), b = gen::state(rng);
    CrossingPoint cp;
    try {
      cp = find_crossing(a, b, p);
    } catch (const PhysicsError& e) {
      EXPECT_EQ(e.code(), Errc::no_crossing);
      continue;
    }
    const double lo = cp.bz_star - 0.01, hi = cp.bz_star + 0.0100037;
    const double scan = oracle::crossing_scan(a.n.value(), a.m.value(), b.n.value(), b.m.value(), p.d_axial,
                                              p.j_eff, p.g2, lo, hi, 2000);
    ASSERT_NEAR(cp.bz_star, scan, 1e-9) << a.str() << " " << b.str();
    EXPECT_EQ(cp.order == CrossingOrder::first_order, a.n == b.n);
    EXPECT_NEAR(energy_diag(a, p, cp.bz_star), energy_diag(b, p, cp.bz_star), 1e-10);
    ++checked;
  }
  EXPECT_GT(checked, 20);
}

TEST(Spectrum, ParallelLevelsHaveNoCrossing) {
  SystemParams p;
  try {
    find_crossing({k32, HalfInt(10)}, {k32, HalfInt(10)}, p);
    FAIL();
  } catch (const PhysicsError& e) {
    EXPECT_EQ(e.code(), Errc::no_crossing);
  }
  // Same n + m: parallel in field.
  EXPECT_THROW(find_crossing({k32, HalfInt(9)}, {k12, HalfInt(10)}, p), PhysicsError);
}

TEST(Spectrum, EnumerateFirstOrder) {
  SystemParams p;
  const auto cps = enumerate_crossings(p, 0.0, 0.05, low_lying_states(), true);
  ASSERT_EQ(cps.size(), 2u);
  EXPECT_NEAR(cps[0].bz_star, 0.006513, 5e-7);
  EXPECT_NEAR(cps[1].bz_star, 0.019540, 5e-7);
  EXPECT_EQ(cps[0].state_a.n, k12);
  EXPECT_EQ(cps[1].state_a.n, k32);
}

TEST(Spectrum, AllPairsClassification) {
  SystemParams p;
  const auto cps = enumerate_crossings(p, 0.0, 0.05);
  int first = 0;
  for (const auto& cp : cps) {
    if (cp.state_a.n == cp.state_b.n) {
      EXPECT_EQ(cp.order, CrossingOrder::first_order);
      ++first;
    } else {
      EXPECT_EQ(cp.order, CrossingOrder::higher_order);
    }
    EXPECT_GE(cp.bz_star, 0.0);
    EXPECT_LE(cp.bz_star, 0.05);
  }
  EXPECT_EQ(first, 2);
  for (std::size_t i = 1; i < cps.size(); ++i) EXPECT_LE(cps[i - 1].bz_star, cps[i].bz_star);
}

TEST(Spectrum, ZeroCouplingCollapses) {
  SystemParams p;
  p.j_eff = 0.0;
  const auto cps = enumerate_crossings(p, -0.05, 0.05, low_lying_states(), true);
  ASSERT_FALSE(cps.empty());
  for (const auto& cp : cps) EXPECT_NEAR(cp.bz_star, 0.0, 1e-15);
  EXPECT_THROW(selective_window(ground_doublet_crossing(k32, p), p), PhysicsError);
}

TEST(Spectrum, SelectiveWindowExcludesOtherCrossing) {
  SystemParams p;
  const auto cp = ground_doublet_crossing(k32, p);
  const auto w = selective_window(cp, p);
  EXPECT_LT(w.from, cp.bz_star);
  EXPECT_GT(w.to, cp.bz_star);
  const auto inside = first_order_in_window(p, w.from, w.to);
  ASSERT_EQ(inside.size(), 1u);
  EXPECT_EQ(inside[0].state_a.n, k32);
  EXPECT_GT(w.from, 0.006513);
}

TEST(Spectrum, FullSpectrumHasAllLevels) {
  SystemParams p;
  const auto lv = full_spectrum(p, 0.05, true);
  ASSERT_EQ(lv.size(), 84u);
  for (std::size_t i = 1; i < lv.size(); ++i) EXPECT_LE(lv[i - 1].energy, lv[i].energy);
  // The ground state carries the label of the lowest diagonal level.
  StateLabel lowest = product_label(0);
  for (Eigen::Index i = 1; i < kProductDim; ++i)
    if (energy_diag(product_label(i), p, 0.05) < energy_diag(lowest, p, 0.05)) lowest = product_label(i);
  EXPECT_EQ(lv.front().state, lowest);
  EXPECT_EQ(lowest.str(), "|-3/2,10>");
  EXPECT_GT(lv.front().weight, 0.99);
}

TEST(Spectrum, FullSpectrumDiagonalLimit) {
  SystemParams p;
  p.j_eff = 0.0;
  p.e_transverse = 0.0;
  const double bz = 0.031;
  const auto lv = full_spectrum(p, bz, true);
  std::vector<double> ref;
  for (Eigen::Index i = 0; i < kProductDim; ++i) ref.push_back(energy_diag(product_label(i), p, bz));
  std::sort(ref.begin(), ref.end());
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(lv[i].energy, ref[i], 1e-10);
}

TEST(Spectrum, AvoidedGapOpensWithTransverseTerm) {
  SystemParams p;
  const StateLabel a{k32, HalfInt(-10)}, b{k32, HalfInt(10)};
  const double gap = avoided_gap(a, b, p);
  EXPECT_GT(gap, 1e-11);
  EXPECT_LT(gap, 1e-6);
  SystemParams q = p;
  q.e_transverse = 0.0;
  // Without transverse anisotropy the m = +-10 doublet is not mixed by any term of
  // order below 20 in S+, so the gap falls to the numerical floor.
  EXPECT_LT(avoided_gap(a, b, q), gap * 1e-2);
}

TEST(Spectrum, WeakCouplingReportShape) {
  SystemParams p;
  const auto r = weak_coupling_check(p, 0.05);
  EXPECT_EQ(r.full.size(), 84u);
  EXPECT_EQ(r.diagonal.size(), 84u);
  EXPECT_GT(r.delta_min, 0.0);
  EXPECT_NEAR(r.bound, 10 * p.j_eff * p.j_eff / r.delta_min, 1e-15);
  // With the dipolar flip-flop terms removed the models must coincide.
  SystemParams q = p;
  q.j_eff = 0.0;
  const auto z = weak_coupling_check(q, 0.05);
  EXPECT_LT(z.max_deviation, 1e-10);
}

TEST(Spectrum, WeakCouplingShiftIsSecondOrder) {
  // Halving J quarters the largest level shift once J is small.
  SystemParams p;
  p.j_eff = 2e-4;
  const auto a = weak_coupling_check(p, 0.05);
  p.j_eff = 1e-4;
  const auto b = weak_coupling_check(p, 0.05);
  EXPECT_TRUE(a.sector_matched);
  EXPECT_TRUE(b.sector_matched);
  EXPECT_NEAR(a.max_deviation / b.max_deviation, 4.0, 0.05);
  // Both the shift and the bound scale as J^2, so their ratio does not depend on J.
  EXPECT_NEAR(a.max_deviation / a.bound, b.max_deviation / b.bound, 0.05 * b.max_deviation / b.bound);
}
