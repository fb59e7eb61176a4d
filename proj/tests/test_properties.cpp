// Randomised parameter sets: the solver's output must certify itself.
#include <gtest/gtest.h>

#include <random>

#include "omegadiv/strategy_value.hpp"
#include "omegadiv/simulate.hpp"
#include "omegadiv/verify.hpp"

using namespace omegadiv;

namespace {

std::vector<ModelParams> random_params(int n) {
  std::mt19937_64 gen(424242);
  std::uniform_real_distribution<double> mu(0.05, 0.2), sigma(0.15, 0.4), r(0.01, 0.05), q(0.05, 0.3);
  std::vector<ModelParams> out;
  for (int i = 0; i < n; ++i) out.push_back(ModelParams{mu(gen), sigma(gen), r(gen), q(gen)});
  return out;
}

}  // namespace

TEST(RandomParams, SeparatorsOrdered) {
  for (const ModelParams& p : random_params(20)) {
    const RegimeSeparators s = separators(p);
    EXPECT_LT(s.b_classical_penalized, s.b_classical_base) << to_string(p);
    EXPECT_LT(s.b_classical_penalized, s.y_lower) << to_string(p);
    EXPECT_LT(s.y_lower, s.y_upper) << to_string(p);
  }
}

TEST(RandomParams, SolutionsCertifyInEveryRegime) {
  VerifyOptions opt;
  opt.auxiliary = false;
  opt.grid_n = 601;
  for (const ModelParams& p : random_params(20)) {
    const RegimeSeparators s = separators(p);
    for (double y : {0.5 * s.y_lower, s.y_lower, 0.5 * (s.y_lower + s.y_upper), 1.01 * s.y_upper}) {
      const VerifyReport r = verify(solve(p, y), opt);
      for (const CheckRecord& c : r.checks) {
        EXPECT_TRUE(c.pass) << to_string(p) << " y=" << y << " " << c.name << " worst " << c.worst;
      }
    }
  }
}

TEST(RandomParams, StrategyEngineAgreesWithClosedForm) {
  for (const ModelParams& p : random_params(20)) {
    const RegimeSeparators s = separators(p);
    for (double y : {0.7 * s.y_lower, 0.5 * (s.y_lower + s.y_upper), 1.2 * s.y_upper}) {
      const RegimeSolution sol = solve(p, y);
      const PiecewiseValue j = strategy_value(p, y, strategy_from_solution(sol));
      for (double x = 0.0; x < 2.0 * s.y_upper; x += 0.05 * s.y_upper) {
        EXPECT_NEAR(j.value(x), value_at(sol, x), 1e-9 * (1.0 + value_at(sol, x))) << to_string(p);
      }
    }
  }
}

TEST(RandomParams, SandwichAndMonotoneInY) {
  for (const ModelParams& p : random_params(20)) {
    const ClassicalSolution lo = classical_solve(p, p.penalized_rate());
    const ClassicalSolution hi = classical_solve(p, p.r);
    const double top = 1.2 * separators(p).y_upper;
    for (double x = 0.0; x <= top; x += top / 10) {
      double prev = classical_value(hi, x);
      for (double y = top / 15; y <= top; y += top / 15) {
        const double v = value_at(solve(p, y), x);
        EXPECT_GE(v, classical_value(lo, x) - 1e-9);
        EXPECT_LE(v, prev + 1e-9);
        prev = v;
      }
    }
  }
}

TEST(RandomParams, AppendixProperties) {
  for (const ModelParams& p : random_params(20)) {
    for (const CheckRecord& c : check_auxiliary_properties(p)) {
      EXPECT_TRUE(c.pass) << to_string(p) << " " << c.name << " " << c.detail;
    }
  }
}

TEST(RandomParams, SeparatorResidualChangesSignOnce) {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> mu(0.05, 0.2), sigma(0.15, 0.4), r(0.01, 0.05), q(0.05, 0.3);
  for (int i = 0; i < 100; ++i) {
    const ModelParams p{mu(gen), sigma(gen), r(gen), q(gen)};
    const RegimeSeparators s = separators(p);
    EXPECT_LT(s.b_classical_penalized, s.y_lower);
    EXPECT_LT(s.y_lower, s.y_upper);
    const int n = 10000;
    int changes = 0;
    bool prev = false;
    for (int k = 0; k < n; ++k) {
      const double y = s.b_classical_penalized + (s.y_upper - s.b_classical_penalized) * (k + 0.5) / n;
      const bool positive = f_of_y(p, y) > 0.0;
      if (k > 0 && positive != prev) ++changes;
      prev = positive;
    }
    EXPECT_EQ(changes, 1) << to_string(p);
  }
}
