#pragma once

#include <cstddef>
#include <vector>

#include "omegadiv/model.hpp"

namespace omegadiv {

enum class SegmentKind { Exp, Affine };

/// Discount rate a segment's exponentials were built for.
enum class RateTag { Base, Penalized };

/// One closed-form piece, anchored at its left end a:
///   Exp:    c1 e^{g1 (x - a)} + c2 e^{g2 (x - a)}
///   Affine: c1 + c2 (x - a)
struct Segment {
  SegmentKind kind = SegmentKind::Affine;
  RateTag rate = RateTag::Base;
  double anchor = 0.0;
  double coeff1 = 0.0;
  double coeff2 = 0.0;
  double gamma1 = 0.0;  ///< unused for Affine
  double gamma2 = 0.0;

  double value(double x) const;
  double deriv(double x) const;
  double second_deriv(double x) const;
};

Segment exp_segment(const Exponents& ex, RateTag rate, double anchor, double c1, double c2);
Segment affine_segment(double anchor, double value_at_anchor, double slope = 1.0);

/// Segment built from value and slope at its anchor for a given rate.
Segment exp_segment_from_jet(const Exponents& ex, RateTag rate, double anchor, double value,
                             double slope);

/// Value function on [0, inf) as consecutive segments. Segment i covers
/// [breakpoints[i-1], breakpoints[i]) with breakpoints[-1] = 0.
class PiecewiseValue {
 public:
  PiecewiseValue() = default;
  PiecewiseValue(std::vector<double> breakpoints, std::vector<Segment> segments);

  double value(double x) const;
  double deriv(double x, Side side = Side::Right) const;
  double second_deriv(double x, Side side = Side::Right) const;

  /// Segment used to evaluate at x; at a breakpoint, Side picks the neighbour.
  std::size_t segment_index(double x, Side side = Side::Right) const;

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<Segment>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }

 private:
  std::vector<double> breakpoints_;
  std::vector<Segment> segments_;
};

}  // namespace omegadiv
