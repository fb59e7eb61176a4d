#pragma once

#include <string>

#include "omegadiv/model.hpp"

namespace omegadiv {

/// Thresholds splitting y into the three optimality regimes.
struct RegimeSeparators {
  double y_lower = 0.0;                ///< y_l, root of f_of_y
  double y_upper = 0.0;                ///< y_u, closed form
  double b_classical_penalized = 0.0;  ///< b*_{r+q}
  double b_classical_base = 0.0;       ///< b*_r
};

enum class Regime { Classical, Subcritical, Critical, Supercritical };

std::string to_string(Regime regime);
Regime regime_from_string(const std::string& name);

/// y_u = b*_{r+q} + mu/r - mu/(r+q).
double y_upper(const ModelParams& params);

/// Residual whose unique zero on (b*_{r+q}, y_u) is y_l. Requires 0 < y < y_u.
double f_of_y(const ModelParams& params, double y);

double y_lower(const ModelParams& params);

RegimeSeparators separators(const ModelParams& params);

/// y = 0 is Classical; (0, y_l] Subcritical; (y_l, y_u) Critical; [y_u, inf) Supercritical.
Regime classify(const RegimeSeparators& sep, double y);
Regime classify(const ModelParams& params, double y);

}  // namespace omegadiv
