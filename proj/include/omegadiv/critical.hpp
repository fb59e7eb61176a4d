#pragma once

#include "omegadiv/model.hpp"
#include "omegadiv/piecewise.hpp"

namespace omegadiv {

/// Coefficient maps at (b, y). e1, e2 depend on b only.
struct CoeffQuad {
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;
  double e4 = 0.0;
};

/// Two action intervals [b_low_fixed, b_low_free] and [b_up_free, inf).
///   w = V_{r+q}                 on [0, b_low_free)
///   w = ee1 psi_{r+q} + ee2 phi_{r+q} on [b_low_free, y)
///   w = ee3 psi_r + ee4 phi_r   on [y, b_up_free)
///   w affine with slope 1       beyond
struct CriticalSolution {
  double y = 0.0;
  double b_low_fixed = 0.0;
  double b_low_free = 0.0;
  double b_up_free = 0.0;
  double ee1 = 0.0;
  double ee2 = 0.0;
  double ee3 = 0.0;
  double ee4 = 0.0;
};

/// Requires 0 < b <= y.
CoeffQuad e_coeffs(const ModelParams& params, double b, double y);

/// log H(b, y); H(b, y) = 1 is the equation for the lower free boundary.
double log_H(const ModelParams& params, double b, double y);
double H_fn(const ModelParams& params, double b, double y);

struct CriticalBoundaries {
  double b_low_free;
  double b_up_free;
};

/// Requires y_l < y < y_u.
CriticalBoundaries critical_boundaries(const ModelParams& params, double y);

CriticalSolution critical_solve(const ModelParams& params, double y);

PiecewiseValue critical_pieces(const CriticalSolution& sol, const ModelParams& params);

double critical_value(const CriticalSolution& sol, const ModelParams& params, double x);
double critical_deriv(const CriticalSolution& sol, const ModelParams& params, double x,
                      Side side = Side::Right);

}  // namespace omegadiv
