#include <gtest/gtest.h>

#include <cmath>

#include "omegadiv/errors.hpp"
#include "omegadiv/regime.hpp"
#include "omegadiv/subcritical.hpp"

using namespace omegadiv;

namespace {
const ModelParams kDefault{0.1, 0.1, 0.02, 0.1};
}

TEST(SubcriticalBarrier, ReferenceValues) {
  const double yl = y_lower(kDefault);
  EXPECT_NEAR(subcritical_barrier(kDefault, 0.9 * yl).barrier, 1.8717605337525442, 1e-10);
  EXPECT_NEAR(subcritical_barrier(kDefault, yl).barrier, 2.0463673695891673, 1e-10);
  EXPECT_THROW(subcritical_barrier(kDefault, 0.0), ValidationError);
}

TEST(SubcriticalBarrier, GapSlopeMatchesDifferences) {
  for (double y : {0.1, 0.3, 0.6}) {
    const double h = 1e-5;
    const double fd = (subcritical_barrier(kDefault, y + h).gap - subcritical_barrier(kDefault, y - h).gap) / (2 * h);
    EXPECT_NEAR(subcritical_gap_slope(kDefault, y), fd, 1e-7);
    EXPECT_LT(subcritical_gap_slope(kDefault, y), 0.0);
    EXPECT_GT(subcritical_gap_slope(kDefault, y), -1.0);
  }
}

TEST(SubcriticalCoeffs, SmoothFitAndBoundary) {
  const double y = 0.9 * y_lower(kDefault);
  const SubcriticalSolution s = subcritical_coeffs(kDefault, y);
  EXPECT_EQ(s.k2, -s.k1);
  EXPECT_GT(s.k3, 0.0);
  EXPECT_LT(s.k4, 0.0);
  EXPECT_EQ(subcritical_value(s, kDefault, 0.0), 0.0);
  EXPECT_NEAR(subcritical_deriv(s, kDefault, s.barrier, Side::Left), 1.0, 1e-10);
  const double vb = subcritical_value(s, kDefault, s.barrier);
  EXPECT_NEAR(subcritical_value(s, kDefault, s.barrier + 2.0), vb + 2.0, 1e-12);
  // Continuity of value and slope at y.
  const PiecewiseValue pv = subcritical_pieces(s, kDefault);
  EXPECT_NEAR(pv.value(y), pv.segments()[0].value(y), 1e-12);
  EXPECT_NEAR(pv.deriv(y, Side::Left), pv.deriv(y, Side::Right), 1e-10);
}

TEST(SubcriticalAtLowerSeparator, CoincidesWithPenalizedClassicalBelowItsBarrier) {
  const RegimeSeparators s = separators(kDefault);
  const SubcriticalSolution sol = subcritical_coeffs(kDefault, s.y_lower);
  const ClassicalSolution c = classical_solve(kDefault, kDefault.penalized_rate());
  for (double x = 0.0; x <= c.barrier; x += c.barrier / 50) {
    EXPECT_NEAR(subcritical_value(sol, kDefault, x), classical_value(c, x), 1e-12);
  }
  EXPECT_NEAR(subcritical_deriv(sol, kDefault, c.barrier), 1.0, 1e-12);
}
