#pragma once

#include "omegadiv/model.hpp"
#include "omegadiv/piecewise.hpp"
#include "omegadiv/strategy.hpp"

namespace omegadiv {

/// Expected discounted dividends J(x; y, D) of a barrier strategy, in closed
/// form. Built independently of the optimal-solution formulas by solving the
/// linear boundary/pasting conditions of each waiting band.
PiecewiseValue strategy_value(const ModelParams& params, double y, const Strategy& strategy);

struct BarrierScan {
  double barrier = 0.0;
  double value = 0.0;  ///< J(x0) at the best barrier
};

/// Best single barrier on the grid upper/n, 2 upper/n, ..., upper, judged by J(x0).
BarrierScan best_single_barrier(const ModelParams& params, double y, double x0, double upper,
                                int n = 50);

}  // namespace omegadiv
