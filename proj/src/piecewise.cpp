#include "omegadiv/piecewise.hpp"

#include <algorithm>
#include <cmath>

#include "omegadiv/errors.hpp"

namespace omegadiv {

double Segment::value(double x) const {
  const double u = x - anchor;
  if (kind == SegmentKind::Affine) return coeff1 + coeff2 * u;
  return coeff1 * std::exp(gamma1 * u) + coeff2 * std::exp(gamma2 * u);
}

double Segment::deriv(double x) const {
  const double u = x - anchor;
  if (kind == SegmentKind::Affine) return coeff2;
  return gamma1 * coeff1 * std::exp(gamma1 * u) + gamma2 * coeff2 * std::exp(gamma2 * u);
}

double Segment::second_deriv(double x) const {
  const double u = x - anchor;
  if (kind == SegmentKind::Affine) return 0.0;
  return gamma1 * gamma1 * coeff1 * std::exp(gamma1 * u) +
         gamma2 * gamma2 * coeff2 * std::exp(gamma2 * u);
}

Segment exp_segment(const Exponents& ex, RateTag rate, double anchor, double c1, double c2) {
  Segment s;
  s.kind = SegmentKind::Exp;
  s.rate = rate;
  s.anchor = anchor;
  s.coeff1 = c1;
  s.coeff2 = c2;
  s.gamma1 = ex.gamma1;
  s.gamma2 = ex.gamma2;
  return s;
}

Segment affine_segment(double anchor, double value_at_anchor, double slope) {
  Segment s;
  s.kind = SegmentKind::Affine;
  s.anchor = anchor;
  s.coeff1 = value_at_anchor;
  s.coeff2 = slope;
  return s;
}

Segment exp_segment_from_jet(const Exponents& ex, RateTag rate, double anchor, double value,
                             double slope) {
  const double w = ex.gamma1 - ex.gamma2;
  return exp_segment(ex, rate, anchor, (slope - ex.gamma2 * value) / w,
                     (ex.gamma1 * value - slope) / w);
}

PiecewiseValue::PiecewiseValue(std::vector<double> breakpoints, std::vector<Segment> segments)
    : breakpoints_(std::move(breakpoints)), segments_(std::move(segments)) {
  if (segments_.size() != breakpoints_.size() + 1) {
    throw ValidationError("piecewise value needs one more segment than breakpoints");
  }
  if (!std::is_sorted(breakpoints_.begin(), breakpoints_.end()) ||
      (!breakpoints_.empty() && !(breakpoints_.front() > 0.0))) {
    throw ValidationError("breakpoints must be positive and sorted");
  }
}

std::size_t PiecewiseValue::segment_index(double x, Side side) const {
  if (!(x >= 0.0)) throw ValidationError("value function evaluated at negative surplus");
  if (segments_.empty()) throw ValidationError("empty piecewise value");
  const auto it = side == Side::Right
                      ? std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x)
                      : std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return static_cast<std::size_t>(it - breakpoints_.begin());
}

double PiecewiseValue::value(double x) const { return segments_[segment_index(x)].value(x); }

double PiecewiseValue::deriv(double x, Side side) const {
  return segments_[segment_index(x, side)].deriv(x);
}

double PiecewiseValue::second_deriv(double x, Side side) const {
  return segments_[segment_index(x, side)].second_deriv(x);
}

}  // namespace omegadiv
