#include "omegadiv/subcritical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "omegadiv/errors.hpp"

namespace omegadiv {

BarrierGap subcritical_barrier(const ModelParams& params, double y) {
  params.validate();
  if (!(y > 0.0) || !std::isfinite(y)) throw ValidationError("subcritical barrier requires y > 0");
  const Exponents ex = exponents(params, params.r);
  const double g1 = ex.gamma1;
  const double g2 = ex.gamma2;
  const Jet d = delta_fn(params, y);
  const double arg = (d.d1 - g1 * d.value) * g2 * g2 / ((d.d1 - g2 * d.value) * g1 * g1);
  if (!(arg > 0.0) || !std::isfinite(arg)) {
    throw ConsistencyError("subcritical gap: log argument not positive");
  }
  const double gap = std::log(arg) / (g1 - g2);
  return BarrierGap{y + gap, gap};
}

double subcritical_gap_slope(const ModelParams& params, double y) {
  params.validate();
  if (!(y > 0.0) || !std::isfinite(y)) throw ValidationError("gap slope requires y > 0");
  const Exponents ex = exponents(params, params.r);
  const Exponents pen = exponents(params, params.penalized_rate());
  const Jet d = delta_fn(params, y);
  // delta delta'' - delta'^2 = -(a1 - a2)^2 e^{(a1 + a2) y} for the penalized roots a1, a2.
  const double spread = pen.gamma1 - pen.gamma2;
  const double num = -spread * spread * std::exp((pen.gamma1 + pen.gamma2) * y);
  return num / ((d.d1 - ex.gamma1 * d.value) * (d.d1 - ex.gamma2 * d.value));
}

SubcriticalSolution subcritical_coeffs(const ModelParams& params, double y) {
  const BarrierGap bg = subcritical_barrier(params, y);
  const Exponents ex = exponents(params, params.r);
  const Basis at_b = basis(ex, bg.barrier);
  const Basis at_y = basis(ex, y);
  const Jet d = delta_fn(params, y);
  const Jet eta = eta_fn(params, y, bg.barrier);

  const double den = d.value * eta.d1 - d.d1 * eta.value;
  const double scale = std::abs(d.value * eta.d1) + std::abs(d.d1 * eta.value);
  if (!(std::abs(den) > 1e-300 * std::max(1.0, scale)) || !std::isfinite(den)) {
    std::ostringstream os;
    os << "subcritical coefficients: vanishing denominator at y=" << y;
    throw ConsistencyError(os.str());
  }

  SubcriticalSolution sol;
  sol.y = y;
  sol.barrier = bg.barrier;
  sol.gap = bg.gap;
  sol.k1 = (at_y.psi * eta.d1 - at_y.dpsi * eta.value) / (at_b.dpsi * den);
  sol.k2 = -sol.k1;
  sol.k3 = (at_b.dphi * (d.value * at_y.dpsi - d.d1 * at_y.psi) + den) / (at_b.dpsi * den);
  sol.k4 = (at_y.psi * d.d1 - at_y.dpsi * d.value) / den;
  return sol;
}

PiecewiseValue subcritical_pieces(const SubcriticalSolution& sol, const ModelParams& params) {
  const Exponents pen = exponents(params, params.penalized_rate());
  const Exponents base = exponents(params, params.r);
  const double y = sol.y;
  const double b = sol.barrier;
  if (!(b > y)) throw ConsistencyError("subcritical barrier does not exceed the threshold");

  const Segment lower = exp_segment(pen, RateTag::Penalized, 0.0, sol.k1, sol.k2);
  const Segment middle = exp_segment(base, RateTag::Base, y, sol.k3 * std::exp(base.gamma1 * y),
                                     sol.k4 * std::exp(base.gamma2 * y));
  const Segment upper = affine_segment(b, middle.value(b));
  return PiecewiseValue({y, b}, {lower, middle, upper});
}

double subcritical_value(const SubcriticalSolution& sol, const ModelParams& params, double x) {
  return subcritical_pieces(sol, params).value(x);
}

double subcritical_deriv(const SubcriticalSolution& sol, const ModelParams& params, double x,
                         Side side) {
  return subcritical_pieces(sol, params).deriv(x, side);
}

}  // namespace omegadiv
