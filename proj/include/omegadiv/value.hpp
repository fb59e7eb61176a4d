#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "omegadiv/critical.hpp"
#include "omegadiv/model.hpp"
#include "omegadiv/piecewise.hpp"
#include "omegadiv/regime.hpp"
#include "omegadiv/subcritical.hpp"

namespace omegadiv {

/// Which construction solve() should return. Everything except Auto builds a
/// deliberately chosen (possibly wrong) candidate for the verifier.
enum class Candidate { Auto, ClassicalBase, ClassicalPenalized, Subcritical };

std::string to_string(Candidate candidate);
Candidate candidate_from_string(const std::string& name);

/// Closed interval [lo, hi]; hi may be +inf.
struct Interval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
};

struct RegimeSolution {
  ModelParams params;
  double y = 0.0;
  Regime regime = Regime::Classical;  ///< classification of y, whatever the candidate
  Candidate candidate = Candidate::Auto;
  RegimeSeparators separators;
  PiecewiseValue pieces;
  std::vector<Interval> action;  ///< sorted, disjoint

  std::optional<ClassicalSolution> classical;
  std::optional<SubcriticalSolution> subcritical;
  std::optional<CriticalSolution> critical;

  /// Breakpoints where the second derivative is allowed to jump.
  std::vector<double> c2_exceptions() const;
  bool in_action_region(double x) const;
};

RegimeSolution solve(const ModelParams& params, double y, Candidate candidate = Candidate::Auto);

double value_at(const RegimeSolution& sol, double x);
double deriv_at(const RegimeSolution& sol, double x, Side side = Side::Right);
double second_deriv_at(const RegimeSolution& sol, double x, Side side = Side::Right);

struct SweepRow {
  double y;
  double x;
  double value;
  double deriv;
  Regime regime;
};

/// Free boundaries at one y; NaN where a boundary does not exist in that regime.
struct BoundaryRow {
  double y;
  Regime regime;
  double barrier;      ///< single barrier (classical, subcritical, supercritical)
  double b_low_fixed;  ///< critical only
  double b_low_free;
  double b_up_free;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  std::vector<BoundaryRow> boundaries;
};

/// Grids must be sorted and nonnegative.
SweepTable sweep(const ModelParams& params, const std::vector<double>& y_grid,
                 const std::vector<double>& x_grid);

BoundaryRow boundaries_of(const RegimeSolution& sol);

}  // namespace omegadiv
