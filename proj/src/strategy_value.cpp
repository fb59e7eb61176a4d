#include "omegadiv/strategy_value.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "omegadiv/errors.hpp"

namespace omegadiv {

Strategy Strategy::single(double barrier) {
  Strategy s;
  s.kind = Kind::Single;
  s.b = barrier;
  return s;
}

Strategy Strategy::double_barrier(double lower, double jump_edge, double upper) {
  Strategy s;
  s.kind = Kind::Double;
  s.b1 = lower;
  s.c1 = jump_edge;
  s.b2 = upper;
  return s;
}

void Strategy::validate() const {
  if (kind == Kind::Single) {
    if (!(b > 0.0) || !std::isfinite(b)) throw ValidationError("single barrier must be > 0");
    return;
  }
  if (!(b1 > 0.0 && b1 < c1 && c1 < b2) || !std::isfinite(b2)) {
    throw ValidationError("double barrier requires 0 < b1 < c1 < b2");
  }
}

std::string to_string(const Strategy& s) {
  std::ostringstream os;
  os.precision(10);
  if (s.kind == Strategy::Kind::Single) {
    os << "single(b=" << s.b << ")";
  } else {
    os << "double(b1=" << s.b1 << ", c1=" << s.c1 << ", b2=" << s.b2 << ")";
  }
  return os.str();
}

namespace {

struct Band {
  double lo, hi;
  Exponents ex;
  RateTag rate;
};

/// Waiting band [lo, hi] with J(lo) = v_lo and J'(hi) = 1, split at y when
/// y lies strictly inside. Returns the exponential segments.
std::vector<Segment> solve_band(const ModelParams& params, double y, double lo, double hi,
                                double v_lo) {
  const Exponents pen = exponents(params, params.penalized_rate());
  const Exponents base = exponents(params, params.r);
  std::vector<Band> bands;
  auto tag_of = [&](double right) { return right <= y ? RateTag::Penalized : RateTag::Base; };
  auto ex_of = [&](RateTag t) { return t == RateTag::Penalized ? pen : base; };
  if (y > lo && y < hi) {
    bands.push_back({lo, y, pen, RateTag::Penalized});
    bands.push_back({y, hi, base, RateTag::Base});
  } else {
    const RateTag t = tag_of(hi);
    bands.push_back({lo, hi, ex_of(t), t});
  }

  // Unknowns per band: alpha multiplies e^{g1 (x - hi)}, beta multiplies e^{g2 (x - lo)}.
  const int n = static_cast<int>(2 * bands.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  auto row_value = [&](int row, std::size_t k, double x, double sign) {
    const Band& bd = bands[k];
    A(row, 2 * k) += sign * std::exp(bd.ex.gamma1 * (x - bd.hi));
    A(row, 2 * k + 1) += sign * std::exp(bd.ex.gamma2 * (x - bd.lo));
  };
  auto row_slope = [&](int row, std::size_t k, double x, double sign) {
    const Band& bd = bands[k];
    A(row, 2 * k) += sign * bd.ex.gamma1 * std::exp(bd.ex.gamma1 * (x - bd.hi));
    A(row, 2 * k + 1) += sign * bd.ex.gamma2 * std::exp(bd.ex.gamma2 * (x - bd.lo));
  };
  int row = 0;
  row_value(row, 0, lo, 1.0);
  rhs(row++) = v_lo;
  for (std::size_t k = 0; k + 1 < bands.size(); ++k) {
    const double x = bands[k].hi;
    row_value(row, k, x, 1.0);
    row_value(row++, k + 1, x, -1.0);
    row_slope(row, k, x, 1.0);
    row_slope(row++, k + 1, x, -1.0);
  }
  row_slope(row, bands.size() - 1, hi, 1.0);
  rhs(row) = 1.0;

  const Eigen::VectorXd sol = A.fullPivLu().solve(rhs);
  if (!sol.allFinite()) throw ConsistencyError("strategy value: singular pasting system");

  std::vector<Segment> segs;
  for (std::size_t k = 0; k < bands.size(); ++k) {
    const Band& bd = bands[k];
    segs.push_back(exp_segment(bd.ex, bd.rate, bd.lo,
                               sol(2 * k) * std::exp(bd.ex.gamma1 * (bd.lo - bd.hi)),
                               sol(2 * k + 1)));
  }
  return segs;
}

struct Pieces {
  std::vector<double> breaks;
  std::vector<Segment> segs;
};

Pieces single_pieces(const ModelParams& params, double y, double b) {
  Pieces p;
  p.segs = solve_band(params, y, 0.0, b, 0.0);
  if (p.segs.size() == 2) p.breaks.push_back(y);
  p.breaks.push_back(b);
  p.segs.push_back(affine_segment(b, p.segs.back().value(b)));
  return p;
}

}  // namespace

PiecewiseValue strategy_value(const ModelParams& params, double y, const Strategy& strategy) {
  params.validate();
  strategy.validate();
  if (!(y >= 0.0) || std::isnan(y)) throw ValidationError("distress threshold y must be >= 0");

  if (strategy.kind == Strategy::Kind::Single) {
    Pieces p = single_pieces(params, y, strategy.b);
    return PiecewiseValue(std::move(p.breaks), std::move(p.segs));
  }

  // After the switch the policy is the single barrier b1.
  Pieces after = single_pieces(params, y, strategy.b1);
  const double v_b1 = after.segs.back().value(strategy.b1);

  Pieces p;
  for (std::size_t i = 0; i + 1 < after.segs.size(); ++i) {
    p.segs.push_back(after.segs[i]);
    p.breaks.push_back(after.breaks[i]);
  }
  // (b1, c1]: lump payment down to b1.
  p.segs.push_back(affine_segment(strategy.b1, v_b1));
  p.breaks.push_back(strategy.c1);
  const double v_c1 = v_b1 + (strategy.c1 - strategy.b1);
  std::vector<Segment> upper = solve_band(params, y, strategy.c1, strategy.b2, v_c1);
  for (std::size_t i = 0; i < upper.size(); ++i) {
    p.segs.push_back(upper[i]);
    p.breaks.push_back(i + 1 < upper.size() ? y : strategy.b2);
  }
  p.segs.push_back(affine_segment(strategy.b2, upper.back().value(strategy.b2)));
  return PiecewiseValue(std::move(p.breaks), std::move(p.segs));
}


std::vector<Perturbation> perturb_boundaries(const Strategy& s, double delta) {
  std::vector<Perturbation> out;
  auto push = [&](const std::string& name, double sign, Strategy moved) {
    try {
      moved.validate();
    } catch (const ValidationError&) {
      return;
    }
    std::ostringstream os;
    os << name << (sign < 0 ? "-" : "+") << delta;
    out.push_back(Perturbation{os.str(), moved});
  };
  for (double sign : {-1.0, 1.0}) {
    const double d = sign * delta;
    if (s.kind == Strategy::Kind::Single) {
      push("b", sign, Strategy::single(s.b + d));
    } else {
      push("b1", sign, Strategy::double_barrier(s.b1 + d, s.c1, s.b2));
      push("c1", sign, Strategy::double_barrier(s.b1, s.c1 + d, s.b2));
      push("b2", sign, Strategy::double_barrier(s.b1, s.c1, s.b2 + d));
    }
  }
  return out;
}

BarrierScan best_single_barrier(const ModelParams& params, double y, double x0, double upper,
                                int n) {
  if (!(upper > 0.0) || n < 1) throw ValidationError("barrier scan needs upper > 0 and n >= 1");
  BarrierScan best{0.0, -std::numeric_limits<double>::infinity()};
  for (int i = 1; i <= n; ++i) {
    const double b = upper * i / n;
    const double v = strategy_value(params, y, Strategy::single(b)).value(x0);
    if (v > best.value) best = BarrierScan{b, v};
  }
  return best;
}

}  // namespace omegadiv
