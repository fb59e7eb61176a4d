#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "omegadiv/value.hpp"

namespace omegadiv {

/// Outcome of one numerical check. `worst` is the largest violation measure
/// seen (pass iff worst <= tolerance) unless `detail` says otherwise.
struct CheckRecord {
  std::string name;
  std::size_t grid_size = 0;
  double worst = 0.0;
  double worst_location = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  double tol = 1e-9;
  double x_max = 0.0;  ///< 0 picks twice the largest breakpoint (at least +2)
  std::size_t grid_n = 2001;
  double band = 1e-6;  ///< excluded half-width around breakpoints
  double fd_step = 1e-6;
  double fd_tol = 1e-4;
  bool auxiliary = true;
};

struct VerifyReport {
  ModelParams params;
  double y = 0.0;
  Regime regime = Regime::Classical;
  Candidate candidate = Candidate::Auto;
  std::vector<CheckRecord> checks;

  bool pass() const;
};

/// Uniform points per segment plus log-spaced points approaching each knot.
std::vector<double> verification_grid(const RegimeSolution& sol, const VerifyOptions& opt);

/// w' >= 1 everywhere and w' = 1 inside the action region.
CheckRecord check_gradient(const RegimeSolution& sol, const std::vector<double>& grid, double tol);

/// (sigma^2/2) w'' + mu w' - (r + q 1{x<y}) w <= 0, with equality in the waiting region.
CheckRecord check_generator(const RegimeSolution& sol, const std::vector<double>& grid, double tol);

/// C1 pasting at every breakpoint, C2 away from the allowed jump points, and
/// the size of the jump where one is allowed.
CheckRecord check_regularity(const RegimeSolution& sol, double tol);

/// Central differences of the value against the closed-form slope.
CheckRecord check_fd_consistency(const RegimeSolution& sol, const std::vector<double>& grid,
                                 double step, double tol);

/// Sign, ordering and monotonicity properties of the auxiliary functions.
std::vector<CheckRecord> check_auxiliary_properties(const ModelParams& params);

VerifyReport verify(const RegimeSolution& sol, const VerifyOptions& opt = {});

}  // namespace omegadiv
