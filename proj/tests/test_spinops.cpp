#include <gtest/gtest.h>

#include "endospin/spinops.hpp"
#include "gen.hpp"
#include "oracles.hpp"

using namespace endospin;

TEST(HalfInt, Basics) {
  const HalfInt h = HalfInt::from_twice(3);
  EXPECT_EQ(h.str(), "3/2");
  EXPECT_EQ((-h).str(), "-3/2");
  EXPECT_EQ(HalfInt(-10).str(), "-10");
  EXPECT_DOUBLE_EQ(h.value(), 1.5);
  EXPECT_EQ(HalfInt::from_double(-0.5), HalfInt::from_twice(-1));
  EXPECT_THROW(HalfInt::from_double(0.3), PhysicsError);
  EXPECT_LT(HalfInt::from_twice(-1), HalfInt(0));
}

TEST(SpinOps, MatchOracleForManySpins) {
  for (int ts = 0; ts <= 20; ++ts) {
    const auto ops = spin_operators(HalfInt::from_twice(ts));
    const auto ref = oracle::spin(ts);
    EXPECT_LT((ops.sx.data() - ref.sx).cwiseAbs().maxCoeff(), 1e-14) << ts;
    EXPECT_LT((ops.sy.data() - ref.sy).cwiseAbs().maxCoeff(), 1e-14) << ts;
    EXPECT_LT((ops.sz.data() - ref.sz).cwiseAbs().maxCoeff(), 1e-14) << ts;
  }
}

TEST(SpinOpsProperty, AlgebraHolds) {
  for (int ts = 1; ts <= 20; ++ts) {
    const auto o = spin_operators(HalfInt::from_twice(ts));
    const Matrix comm = o.sx.data() * o.sy.data() - o.sy.data() * o.sx.data();
    EXPECT_LT((comm - cplx(0, 1) * o.sz.data()).cwiseAbs().maxCoeff(), 1e-12);
    const Matrix casimir = o.sx.data() * o.sx.data() + o.sy.data() * o.sy.data() + o.sz.data() * o.sz.data();
    const double s = 0.5 * ts;
    EXPECT_LT((casimir - s * (s + 1) * Matrix::Identity(ts + 1, ts + 1)).cwiseAbs().maxCoeff(), 1e-11);
    EXPECT_TRUE(o.sx.is_hermitian());
    EXPECT_TRUE(o.sy.is_hermitian());
    EXPECT_TRUE(o.sz.is_diagonal());
  }
}

TEST(SpinOps, BasisOrderingDescending) {
  const auto b = spin_basis(HalfInt::from_twice(3));
  ASSERT_EQ(b.size(), 4u);
  EXPECT_EQ(b.front().str(), "|3/2>");
  EXPECT_EQ(b.back().str(), "|-3/2>");
}

TEST(SpinOps, TensorProduct) {
  const auto a = spin_operators(HalfInt::from_twice(3));
  const auto b = spin_operators(HalfInt(10));
  const SpinMatrix t = tensor(a.sz, b.sz);
  EXPECT_EQ(t.dim(), 84);
  EXPECT_EQ(t.basis().front().str(), "|3/2,10>");
  EXPECT_EQ(t.basis().back().str(), "|-3/2,-10>");
  EXPECT_NEAR(t(0, 0).real(), 15.0, 1e-14);
  EXPECT_NEAR(t(83, 83).real(), 15.0, 1e-14);
  EXPECT_NEAR(t(20, 20).real(), -15.0, 1e-14);
}

TEST(SpinOps, BasisMismatchThrows) {
  const auto a = spin_operators(HalfInt::from_twice(3));
  const auto b = spin_operators(HalfInt(1));
  EXPECT_THROW(a.sz + b.sz, PhysicsError);
}

TEST(SpinOps, PiPulseIsAntidiagonal) {
  const auto o = spin_operators(1.5);
  const SpinMatrix u = expm_hermitian(o.sx, std::numbers::pi);
  Matrix expect = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) expect(i, 3 - i) = cplx(0, 1);
  EXPECT_LT((u.data() - expect).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(SpinOpsProperty, ExpmMatchesTaylorAndIsUnitary) {
  gen::Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = gen::integer(rng, 2, 12);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = cplx(gen::uniform(rng, -1, 1), gen::uniform(rng, -1, 1));
    const Matrix h = 0.5 * (a + a.adjoint());
    std::vector<BasisLabel> basis(n);
    for (int i = 0; i < n; ++i) basis[i] = {{HalfInt(i)}};
    const double t = gen::uniform(rng, 0.0, 5.0);
    const SpinMatrix u = expm_hermitian(SpinMatrix(h, basis), t);
    EXPECT_TRUE(u.is_unitary());
    EXPECT_LT((u.data() - oracle::expm(cplx(0, -t) * h)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(SpinOps, ExpmRejectsNonHermitian) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = 1.0;
  EXPECT_THROW(expm_hermitian(SpinMatrix(a, spin_basis(HalfInt::from_twice(1))), 1.0), PhysicsError);
}

TEST(QuantumStateTest, BasicOps) {
  const auto basis = spin_basis(HalfInt(1));
  QuantumState s = QuantumState::basis_state(basis, basis[0]);
  EXPECT_DOUBLE_EQ(s.norm(), 1.0);
  EXPECT_DOUBLE_EQ(s.population(0), 1.0);
  const auto o = spin_operators(HalfInt(1));
  const QuantumState t = s.apply(expm_hermitian(o.sx, std::numbers::pi));
  EXPECT_NEAR(t.population(2), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(s.inner(t)), 0.0, 1e-12);
  EXPECT_THROW(QuantumState::basis_state(basis, {{HalfInt(5)}}), PhysicsError);
}
