#pragma once

#include "omegadiv/model.hpp"
#include "omegadiv/piecewise.hpp"

namespace omegadiv {

/// Single-barrier solution when the distress threshold is low.
///   w = k1 psi_{r+q} + k2 phi_{r+q}  on [0, y)
///   w = k3 psi_r     + k4 phi_r      on [y, barrier)
///   w affine with slope 1            beyond
struct SubcriticalSolution {
  double y = 0.0;
  double barrier = 0.0;  ///< b*(y)
  double gap = 0.0;      ///< b*(y) - y
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double k4 = 0.0;
};

struct BarrierGap {
  double barrier;
  double gap;
};

/// b*(y) = y + Delta(y). Requires y > 0.
BarrierGap subcritical_barrier(const ModelParams& params, double y);

/// d/dy of the gap, in closed form. Finite differences cannot resolve it once
/// y is a few multiples of b*_{r+q}, where it falls below 1e-15.
double subcritical_gap_slope(const ModelParams& params, double y);

SubcriticalSolution subcritical_coeffs(const ModelParams& params, double y);

PiecewiseValue subcritical_pieces(const SubcriticalSolution& sol, const ModelParams& params);

double subcritical_value(const SubcriticalSolution& sol, const ModelParams& params, double x);
double subcritical_deriv(const SubcriticalSolution& sol, const ModelParams& params, double x,
                         Side side = Side::Right);

}  // namespace omegadiv
