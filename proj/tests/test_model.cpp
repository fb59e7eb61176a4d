#include <gtest/gtest.h>

#include <cmath>

#include "omegadiv/errors.hpp"
#include "omegadiv/model.hpp"

using namespace omegadiv;

namespace {
const ModelParams kDefault{0.1, 0.1, 0.02, 0.1};
}

TEST(Exponents, MatchHighPrecisionValues) {
  const Exponents ex = exponents(kDefault, 0.12);
  EXPECT_NEAR(ex.gamma1, 1.1355287256600438, 1e-14);
  EXPECT_NEAR(ex.gamma2, -21.135528725660044, 1e-13);
  EXPECT_DOUBLE_EQ(ex.rho, 0.12);
}

TEST(Exponents, SumAndProductIdentities) {
  for (double rho : {1e-6, 0.02, 0.12, 3.0}) {
    const Exponents ex = exponents(kDefault, rho);
    EXPECT_LT(ex.gamma2, 0.0);
    EXPECT_GT(ex.gamma1, 0.0);
    EXPECT_NEAR((ex.gamma1 + ex.gamma2) / (-2.0 * kDefault.mu / (kDefault.sigma * kDefault.sigma)), 1.0, 1e-12);
    EXPECT_NEAR(ex.gamma1 * ex.gamma2 / (-2.0 * rho / (kDefault.sigma * kDefault.sigma)), 1.0, 1e-12);
  }
  const Exponents ex = exponents(kDefault, 0.02);
  EXPECT_NEAR(ex.gamma1 * ex.gamma2, -4.0, 1e-12);
}

TEST(Exponents, RejectBadInput) {
  EXPECT_THROW(exponents(kDefault, 0.0), ValidationError);
  EXPECT_THROW(exponents(kDefault, -1.0), ValidationError);
  EXPECT_THROW(exponents(ModelParams{-1.0, 0.1, 0.02, 0.1}, 0.1), ValidationError);
  EXPECT_THROW(exponents(ModelParams{0.1, 0.0, 0.02, 0.1}, 0.1), ValidationError);
  EXPECT_THROW(exponents(ModelParams{0.1, 0.1, NAN, 0.1}, 0.1), ValidationError);
}

TEST(Basis, AtZeroAndAtOne) {
  const Exponents ex = exponents(kDefault, 0.12);
  const Basis b0 = basis(ex, 0.0);
  EXPECT_EQ(b0.psi, 1.0);
  EXPECT_EQ(b0.phi, 1.0);
  EXPECT_EQ(b0.dpsi, ex.gamma1);
  EXPECT_EQ(b0.dphi, ex.gamma2);
  const Basis b1 = basis(kDefault, 0.12, 1.0);
  EXPECT_NEAR(b1.psi, 3.1128189351323253, 1e-13);
  EXPECT_NEAR(b1.d2psi / b1.psi, ex.gamma1 * ex.gamma1, 1e-12);
}

TEST(Delta, VanishesAtZero) {
  const Jet d = delta_fn(kDefault, 0.0);
  const Exponents ex = exponents(kDefault, kDefault.penalized_rate());
  EXPECT_EQ(d.value, 0.0);
  EXPECT_NEAR(d.d1, ex.gamma1 - ex.gamma2, 1e-12);
  EXPECT_GT(d.d1, 0.0);
  EXPECT_THROW(delta_fn(kDefault, -0.1), ValidationError);
}

TEST(Eta, HighPrecisionValueAndBilinearity) {
  const Jet e = eta_fn(kDefault, 1.0, 2.0);
  EXPECT_NEAR(e.value / 4.9758635721068683e-10, 1.0, 1e-8);
  EXPECT_NEAR(e.d1 / -1.0050267226617910e-08, 1.0, 1e-8);
  const Exponents ex = exponents(kDefault, kDefault.r);
  EXPECT_NEAR(eta_fn(kDefault, 0.0, 0.0).value, ex.gamma1 - ex.gamma2, 1e-12);
}

TEST(Classical, BarriersMatchHighPrecision) {
  EXPECT_NEAR(classical_solve(kDefault, 0.12).barrier, 0.26257011609238248, 1e-13);
  EXPECT_NEAR(classical_solve(kDefault, 0.02).barrier, 0.45350647023576528, 1e-13);
}

TEST(Classical, ValueAndSmoothFitAtBarrier) {
  for (double rho : {0.02, 0.12, 0.5}) {
    const ClassicalSolution s = classical_solve(kDefault, rho);
    EXPECT_GT(s.barrier, 0.0);
    EXPECT_NEAR(classical_value(s, s.barrier), kDefault.mu / rho, 1e-10);
    EXPECT_NEAR(classical_deriv(s, s.barrier, Side::Left), 1.0, 1e-10);
    EXPECT_EQ(classical_deriv(s, s.barrier, Side::Right), 1.0);
    EXPECT_NEAR(classical_second_deriv(s, s.barrier, Side::Left), 0.0, 1e-9);
    EXPECT_EQ(classical_value(s, 0.0), 0.0);
    EXPECT_NEAR(classical_value(s, s.barrier + 1.0), kDefault.mu / rho + 1.0, 1e-10);
  }
}
