#include "omegadiv/value.hpp"

#include <algorithm>
#include <cmath>

#include "omegadiv/errors.hpp"

namespace omegadiv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

PiecewiseValue classical_pieces(const ClassicalSolution& c) {
  const RateTag tag = RateTag::Base;
  const Segment lower =
      exp_segment(c.exponents, tag, 0.0, 1.0 / c.normalizer, -1.0 / c.normalizer);
  return PiecewiseValue({c.barrier}, {lower, affine_segment(c.barrier, lower.value(c.barrier))});
}

void attach_classical(RegimeSolution& sol, double rho, RateTag tag) {
  ClassicalSolution c = classical_solve(sol.params, rho);
  PiecewiseValue p = classical_pieces(c);
  std::vector<Segment> segs = p.segments();
  segs.front().rate = tag;
  sol.pieces = PiecewiseValue(p.breakpoints(), std::move(segs));
  sol.action = {Interval{c.barrier}};
  sol.classical = c;
}

void attach_subcritical(RegimeSolution& sol) {
  const SubcriticalSolution s = subcritical_coeffs(sol.params, sol.y);
  sol.pieces = subcritical_pieces(s, sol.params);
  sol.action = {Interval{s.barrier}};
  sol.subcritical = s;
}

void attach_critical(RegimeSolution& sol) {
  const CriticalSolution c = critical_solve(sol.params, sol.y);
  sol.pieces = critical_pieces(c, sol.params);
  sol.action = {Interval{c.b_low_fixed, c.b_low_free}, Interval{c.b_up_free}};
  sol.critical = c;
}

}  // namespace

std::string to_string(Candidate candidate) {
  switch (candidate) {
    case Candidate::Auto: return "auto";
    case Candidate::ClassicalBase: return "classical-r";
    case Candidate::ClassicalPenalized: return "classical-rq";
    case Candidate::Subcritical: return "subcritical";
  }
  return "unknown";
}

Candidate candidate_from_string(const std::string& name) {
  if (name == "auto") return Candidate::Auto;
  if (name == "classical-r") return Candidate::ClassicalBase;
  if (name == "classical-rq" || name == "classical-penalized") return Candidate::ClassicalPenalized;
  if (name == "subcritical") return Candidate::Subcritical;
  throw ValidationError("unknown candidate: " + name);
}

std::vector<double> RegimeSolution::c2_exceptions() const {
  if (subcritical) return {y};
  if (critical) {
    if (critical->b_low_free > critical->b_low_fixed) return {critical->b_low_free, y};
    return {y};
  }
  return {};
}

bool RegimeSolution::in_action_region(double x) const {
  return std::any_of(action.begin(), action.end(),
                     [x](const Interval& iv) { return x >= iv.lo && x <= iv.hi; });
}

RegimeSolution solve(const ModelParams& params, double y, Candidate candidate) {
  params.validate();
  if (!(y >= 0.0) || std::isnan(y)) throw ValidationError("distress threshold y must be >= 0");
  RegimeSolution sol;
  sol.params = params;
  sol.y = y;
  sol.candidate = candidate;
  sol.separators = separators(params);
  sol.regime = classify(sol.separators, y);

  switch (candidate) {
    case Candidate::ClassicalBase:
      attach_classical(sol, params.r, RateTag::Base);
      return sol;
    case Candidate::ClassicalPenalized:
      attach_classical(sol, params.penalized_rate(), RateTag::Penalized);
      return sol;
    case Candidate::Subcritical:
      if (!(y > 0.0 && y <= sol.separators.y_upper)) {
        throw ValidationError("subcritical construction requires 0 < y <= y_u");
      }
      attach_subcritical(sol);
      return sol;
    case Candidate::Auto:
      break;
  }

  switch (sol.regime) {
    case Regime::Classical: attach_classical(sol, params.r, RateTag::Base); break;
    case Regime::Subcritical: attach_subcritical(sol); break;
    case Regime::Critical: attach_critical(sol); break;
    case Regime::Supercritical:
      attach_classical(sol, params.penalized_rate(), RateTag::Penalized);
      break;
  }
  return sol;
}

double value_at(const RegimeSolution& sol, double x) { return sol.pieces.value(x); }

double deriv_at(const RegimeSolution& sol, double x, Side side) {
  return sol.pieces.deriv(x, side);
}

double second_deriv_at(const RegimeSolution& sol, double x, Side side) {
  return sol.pieces.second_deriv(x, side);
}

BoundaryRow boundaries_of(const RegimeSolution& sol) {
  BoundaryRow row{sol.y, sol.regime, kNaN, kNaN, kNaN, kNaN};
  if (sol.critical) {
    row.b_low_fixed = sol.critical->b_low_fixed;
    row.b_low_free = sol.critical->b_low_free;
    row.b_up_free = sol.critical->b_up_free;
  } else if (sol.subcritical) {
    row.barrier = sol.subcritical->barrier;
  } else if (sol.classical) {
    row.barrier = sol.classical->barrier;
  }
  return row;
}

SweepTable sweep(const ModelParams& params, const std::vector<double>& y_grid,
                 const std::vector<double>& x_grid) {
  auto valid = [](const std::vector<double>& g) {
    return std::is_sorted(g.begin(), g.end()) &&
           std::all_of(g.begin(), g.end(), [](double v) { return std::isfinite(v) && v >= 0.0; });
  };
  if (!valid(y_grid) || !valid(x_grid)) {
    throw ValidationError("sweep grids must be sorted, finite and nonnegative");
  }
  SweepTable table;
  table.rows.reserve(y_grid.size() * x_grid.size());
  for (double y : y_grid) {
    const RegimeSolution sol = solve(params, y);
    table.boundaries.push_back(boundaries_of(sol));
    for (double x : x_grid) {
      table.rows.push_back(SweepRow{y, x, value_at(sol, x), deriv_at(sol, x), sol.regime});
    }
  }
  return table;
}

}  // namespace omegadiv
