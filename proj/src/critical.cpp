#include "omegadiv/critical.hpp"

#include <cmath>
#include <sstream>

#include "omegadiv/errors.hpp"
#include "omegadiv/regime.hpp"
#include "omegadiv/roots.hpp"

namespace omegadiv {

namespace {

double upper_from_coeffs(const Exponents& base, const CoeffQuad& c) {
  const double g1 = base.gamma1;
  const double g2 = base.gamma2;
  return (2.0 * std::log(-g2 / g1) + std::log(-c.e4 / c.e3)) / (g1 - g2);
}

}  // namespace

CoeffQuad e_coeffs(const ModelParams& params, double b, double y) {
  params.validate();
  if (!(b > 0.0) || !(b <= y) || !std::isfinite(y)) {
    throw ValidationError("e_coeffs requires 0 < b <= y");
  }
  const Exponents pen = exponents(params, params.penalized_rate());
  const Exponents base = exponents(params, params.r);
  const ClassicalSolution vpen = classical_solve(params, params.penalized_rate());
  const double v = classical_value(vpen, b);

  const Basis pb = basis(pen, b);
  const double w_pen = (pen.gamma1 - pen.gamma2) * std::exp((pen.gamma1 + pen.gamma2) * b);
  CoeffQuad c;
  c.e1 = (pb.phi - pb.dphi * v) / w_pen;
  c.e2 = (pb.dpsi * v - pb.psi) / w_pen;

  const Basis py = basis(pen, y);
  const Basis ry = basis(base, y);
  const double w_base = (base.gamma1 - base.gamma2) * std::exp((base.gamma1 + base.gamma2) * y);
  c.e3 = (c.e1 * (ry.phi * py.dpsi - ry.dphi * py.psi) +
          c.e2 * (ry.phi * py.dphi - ry.dphi * py.phi)) /
         w_base;
  c.e4 = (c.e1 * (ry.dpsi * py.psi - ry.psi * py.dpsi) +
          c.e2 * (ry.dpsi * py.phi - ry.psi * py.dphi)) /
         w_base;
  return c;
}

double log_H(const ModelParams& params, double b, double y) {
  const CoeffQuad c = e_coeffs(params, b, y);
  if (!(c.e3 > 0.0) || !(c.e4 < 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "H(b, y) undefined: e3=" << c.e3 << ", e4=" << c.e4 << " at b=" << b << ", y=" << y;
    throw ConsistencyError(os.str());
  }
  const Exponents base = exponents(params, params.r);
  const double g1 = base.gamma1;
  const double g2 = base.gamma2;
  const double w = g1 - g2;
  return std::log(w) + (g1 + g2) / w * std::log(-g2 / g1) + (-g2 / w) * std::log(c.e3) +
         (g1 / w) * std::log(-c.e4);
}

double H_fn(const ModelParams& params, double b, double y) {
  return std::exp(log_H(params, b, y));
}

CriticalBoundaries critical_boundaries(const ModelParams& params, double y) {
  const RegimeSeparators sep = separators(params);
  if (!(y > sep.y_lower && y < sep.y_upper)) {
    throw ValidationError("critical boundaries require y_l < y < y_u");
  }
  const double lo = sep.b_classical_penalized;
  const double b_low = bracketed_root([&](double b) { return log_H(params, b, y); }, lo, y,
                                      "critical lower boundary");
  const Exponents base = exponents(params, params.r);
  const double b_up = upper_from_coeffs(base, e_coeffs(params, b_low, y));
  if (!(b_up > y) || !std::isfinite(b_up)) {
    std::ostringstream os;
    os.precision(17);
    os << "critical upper boundary " << b_up << " does not exceed y=" << y;
    throw ConsistencyError(os.str());
  }
  return CriticalBoundaries{b_low, b_up};
}

CriticalSolution critical_solve(const ModelParams& params, double y) {
  const CriticalBoundaries cb = critical_boundaries(params, y);
  const CoeffQuad c = e_coeffs(params, cb.b_low_free, y);
  CriticalSolution sol;
  sol.y = y;
  sol.b_low_fixed = classical_solve(params, params.penalized_rate()).barrier;
  sol.b_low_free = cb.b_low_free;
  sol.b_up_free = cb.b_up_free;
  sol.ee1 = c.e1;
  sol.ee2 = c.e2;
  sol.ee3 = c.e3;
  sol.ee4 = c.e4;
  return sol;
}

PiecewiseValue critical_pieces(const CriticalSolution& sol, const ModelParams& params) {
  const ClassicalSolution vpen = classical_solve(params, params.penalized_rate());
  const Exponents& pen = vpen.exponents;
  const Exponents base = exponents(params, params.r);
  const double b0 = sol.b_low_fixed;
  const double bl = sol.b_low_free;
  const double y = sol.y;
  const double bu = sol.b_up_free;

  std::vector<double> breaks;
  std::vector<Segment> segs;
  segs.push_back(exp_segment(pen, RateTag::Penalized, 0.0, 1.0 / vpen.normalizer,
                             -1.0 / vpen.normalizer));
  if (bl > b0) {
    breaks.push_back(b0);
    segs.push_back(affine_segment(b0, classical_value(vpen, b0)));
  }
  if (y > bl) {
    breaks.push_back(bl);
    segs.push_back(exp_segment(pen, RateTag::Penalized, bl, sol.ee1 * std::exp(pen.gamma1 * bl),
                               sol.ee2 * std::exp(pen.gamma2 * bl)));
  }
  breaks.push_back(y);
  segs.push_back(exp_segment(base, RateTag::Base, y, sol.ee3 * std::exp(base.gamma1 * y),
                             sol.ee4 * std::exp(base.gamma2 * y)));
  breaks.push_back(bu);
  segs.push_back(affine_segment(bu, segs.back().value(bu)));
  return PiecewiseValue(std::move(breaks), std::move(segs));
}

double critical_value(const CriticalSolution& sol, const ModelParams& params, double x) {
  return critical_pieces(sol, params).value(x);
}

double critical_deriv(const CriticalSolution& sol, const ModelParams& params, double x,
                      Side side) {
  return critical_pieces(sol, params).deriv(x, side);
}

}  // namespace omegadiv
