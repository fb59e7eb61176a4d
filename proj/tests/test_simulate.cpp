#include <gtest/gtest.h>

#include <cmath>

#include "omegadiv/errors.hpp"
#include "omegadiv/simulate.hpp"
#include "omegadiv/strategy_value.hpp"
#include "omegadiv/value.hpp"

using namespace omegadiv;

namespace {
const ModelParams kDefault{0.1, 0.1, 0.02, 0.1};

PathConfig quick(std::size_t n = 2000, double dt = 1e-3) {
  PathConfig c;
  c.dt = dt;
  c.n_paths = n;
  c.seed = 7;
  return c;
}
}  // namespace

TEST(SimulatePath, ZeroSurplusIsRuinedImmediately) {
  const PathResult r = simulate_path(Strategy::single(1.0), 0.0, 1.0, kDefault, quick(), 0);
  EXPECT_TRUE(r.ruined);
  EXPECT_EQ(r.reward, 0.0);
  EXPECT_EQ(r.steps, 0u);
}

TEST(SimulatePath, InitialLumpIsPaidUndiscounted) {
  std::vector<TracePoint> tr;
  const PathResult r = simulate_path(Strategy::single(1.0), 3.0, 1.0, kDefault, quick(), 3, &tr, 1);
  ASSERT_GE(tr.size(), 2u);
  EXPECT_GE(tr[1].dividends, 2.0);
  EXPECT_GE(r.reward, 2.0 - 1e-12);
}

TEST(SimulatePath, PathwiseInvariantsSingleBarrier) {
  const PathConfig c = quick(2, 1e-3);
  for (std::uint64_t i = 0; i < 20; ++i) {
    std::vector<TracePoint> tr;
    simulate_path(Strategy::single(1.0), 0.8, 0.5, kDefault, c, i, &tr, 1);
    for (std::size_t k = 1; k < tr.size(); ++k) {
      EXPECT_GE(tr[k].dividends, tr[k - 1].dividends);
      EXPECT_GE(tr[k].clock, tr[k - 1].clock);
      EXPECT_LE(tr[k].x, 1.0);
    }
  }
}

TEST(SimulatePath, NoReentryAfterLumpSwitch) {
  // Higher volatility so that paths reach the lower action region quickly.
  const ModelParams noisy{0.1, 0.4, 0.02, 0.1};
  const Strategy s = Strategy::double_barrier(0.3, 1.1, 2.3);
  PathConfig c = quick(2, 1e-3);
  c.t_max = 30.0;
  int switched_paths = 0;
  for (std::uint64_t i = 0; i < 40; ++i) {
    std::vector<TracePoint> tr;
    simulate_path(s, 2.0, 2.0, noisy, c, i, &tr, 1);
    bool switched = false;
    for (std::size_t k = 1; k < tr.size(); ++k) {
      EXPECT_GE(tr[k].dividends, tr[k - 1].dividends);
      if (switched) {
        EXPECT_LE(tr[k].x, s.b1);
      } else {
        EXPECT_LE(tr[k].x, s.b2);
      }
      if (tr[k].x <= s.c1) switched = true;
    }
    switched_paths += switched;
  }
  EXPECT_GT(switched_paths, 0);
}

TEST(McValue, ReproducibleAndIndependentOfThreads) {
  PathConfig a = quick(3000);
  a.threads = 1;
  PathConfig b = a;
  b.threads = 3;
  const Strategy s = Strategy::double_barrier(0.26, 1.14, 2.31);
  const McEstimate e1 = mc_value(s, 1.5, 2.0, kDefault, a);
  const McEstimate e2 = mc_value(s, 1.5, 2.0, kDefault, b);
  const McEstimate e3 = mc_value(s, 1.5, 2.0, kDefault, a);
  EXPECT_EQ(e1.mean, e2.mean);
  EXPECT_EQ(e1.std_error, e2.std_error);
  EXPECT_EQ(e1.mean, e3.mean);
  EXPECT_EQ(e1.n_steps, e2.n_steps);
}

TEST(McValue, MatchesClosedFormAtCoarseStep) {
  const double y = 1.5714615225296140;
  const RegimeSolution sol = solve(kDefault, y);
  const Strategy s = strategy_from_solution(sol);
  for (Estimator est : {Estimator::Discounting, Estimator::Killing}) {
    PathConfig c = quick(4000);
    c.estimator = est;
    const McEstimate e = mc_value(s, 1.0, y, kDefault, c);
    // Discrete ruin monitoring biases upward by O(sqrt(dt)).
    EXPECT_LT(std::abs(e.mean - value_at(sol, 1.0)), 3.0 * e.std_error + 0.02) << to_string(est);
    EXPECT_GT(e.std_error, 0.0);
  }
}

TEST(McValue, NoDistressZoneMatchesClassical) {
  const ClassicalSolution c = classical_solve(kDefault, kDefault.r);
  const McEstimate e = mc_value(Strategy::single(c.barrier), 0.3, 0.0, kDefault, quick(4000));
  EXPECT_EQ(e.mean_clock_at_end, 0.0);
  EXPECT_LT(std::abs(e.mean - classical_value(c, 0.3)), 3.0 * e.std_error + 0.02);
}

TEST(McValue, TruncatedAndRegenerativeAgree) {
  PathConfig c = quick(3000, 2e-3);
  c.bias_tol = 1e-2;
  const Strategy s = Strategy::single(0.26257011609238248);
  const McEstimate a = mc_value(s, 0.5, 5.0, kDefault, c);
  const McEstimate b = mc_value_truncated(s, 0.5, 5.0, kDefault, c);
  EXPECT_LT(std::abs(a.mean - b.mean), 3.0 * std::hypot(a.std_error, b.std_error) + 0.01);
}

TEST(McValue, MonotoneInThreshold) {
  const Strategy s = Strategy::single(1.0);
  const McEstimate lo = mc_value(s, 0.8, 0.2, kDefault, quick(2000));
  const McEstimate hi = mc_value(s, 0.8, 1.5, kDefault, quick(2000));
  EXPECT_LE(hi.mean, lo.mean + 3.0 * std::hypot(lo.std_error, hi.std_error));
}

TEST(McValue, RejectsBadKnobs) {
  PathConfig c = quick();
  c.dt = -1.0;
  EXPECT_THROW(mc_value(Strategy::single(1.0), 1.0, 1.0, kDefault, c), ValidationError);
  c = quick();
  c.n_paths = 1;
  EXPECT_THROW(mc_value(Strategy::single(1.0), 1.0, 1.0, kDefault, c), ValidationError);
  EXPECT_THROW(mc_value(Strategy::single(1.0), -1.0, 1.0, kDefault, quick()), ValidationError);
  EXPECT_THROW(mc_value(Strategy::double_barrier(1.0, 0.5, 2.0), 1.0, 1.0, kDefault, quick()), ValidationError);
  EXPECT_THROW(estimator_from_string("antithetic"), ValidationError);
}

TEST(StrategyFromSolution, MatchesRegimes) {
  const Strategy sub = strategy_from_solution(solve(kDefault, 1.5714615225296140));
  EXPECT_EQ(sub.kind, Strategy::Kind::Single);
  EXPECT_NEAR(sub.b, 1.8717605337525442, 1e-10);
  const Strategy crit = strategy_from_solution(solve(kDefault, 2.0143852008055189));
  EXPECT_EQ(crit.kind, Strategy::Kind::Double);
  EXPECT_NEAR(crit.b1, 0.26257011609238248, 1e-12);
  EXPECT_NEAR(crit.c1, 1.1393886157629960, 1e-10);
  EXPECT_NEAR(crit.b2, 2.3146842119312435, 1e-10);
}
