#include "omegadiv/regime.hpp"

#include <cmath>

#include "omegadiv/errors.hpp"
#include "omegadiv/roots.hpp"

namespace omegadiv {

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Classical: return "classical";
    case Regime::Subcritical: return "subcritical";
    case Regime::Critical: return "critical";
    case Regime::Supercritical: return "supercritical";
  }
  return "unknown";
}

Regime regime_from_string(const std::string& name) {
  if (name == "classical") return Regime::Classical;
  if (name == "subcritical") return Regime::Subcritical;
  if (name == "critical") return Regime::Critical;
  if (name == "supercritical") return Regime::Supercritical;
  throw ValidationError("unknown regime tag: " + name);
}

double y_upper(const ModelParams& params) {
  params.validate();
  const double b = classical_solve(params, params.penalized_rate()).barrier;
  return b + params.mu / params.r - params.mu / params.penalized_rate();
}

double f_of_y(const ModelParams& params, double y) {
  const double yu = y_upper(params);
  if (!(y > 0.0 && y < yu)) throw ValidationError("f_of_y requires 0 < y < y_u");
  const Exponents ex = exponents(params, params.r);
  const double g1 = ex.gamma1;
  const double g2 = ex.gamma2;
  const Jet d = delta_fn(params, y);
  const double b_pen = classical_solve(params, params.penalized_rate()).barrier;
  const double d1_at_barrier = delta_fn(params, b_pen).d1;
  const double lead = -g1 / g2 * d.d1 + g1 * d.value;
  const double ratio = (g2 * g2) / (g1 * g1) * (d.d1 - g1 * d.value) / (d.d1 - g2 * d.value);
  return lead * std::pow(ratio, g1 / (g1 - g2)) - d1_at_barrier;
}

double y_lower(const ModelParams& params) {
  params.validate();
  const double b_pen = classical_solve(params, params.penalized_rate()).barrier;
  const double yu = y_upper(params);
  return bracketed_root([&](double y) { return f_of_y(params, y); }, b_pen + 1e-9, yu - 1e-9,
                        "y_lower");
}

RegimeSeparators separators(const ModelParams& params) {
  params.validate();
  RegimeSeparators sep;
  sep.b_classical_penalized = classical_solve(params, params.penalized_rate()).barrier;
  sep.b_classical_base = classical_solve(params, params.r).barrier;
  sep.y_upper = y_upper(params);
  sep.y_lower = y_lower(params);
  return sep;
}

Regime classify(const RegimeSeparators& sep, double y) {
  if (!(y >= 0.0)) throw ValidationError("distress threshold y must be >= 0");
  if (y == 0.0) return Regime::Classical;
  if (y <= sep.y_lower) return Regime::Subcritical;
  if (y < sep.y_upper) return Regime::Critical;
  return Regime::Supercritical;
}

Regime classify(const ModelParams& params, double y) { return classify(separators(params), y); }

}  // namespace omegadiv
