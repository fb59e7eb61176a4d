#pragma once

#include <string>

namespace omegadiv {

/// Drifted Brownian surplus dX = mu dt + sigma dW - dD, discounted at r,
/// with an extra rate q while the surplus sits below the distress threshold.
struct ModelParams {
  double mu = 0.1;     ///< drift per unit time
  double sigma = 0.1;  ///< volatility per sqrt-time
  double r = 0.02;     ///< base discount rate
  double q = 0.1;      ///< omega-clock penalty rate

  /// Throws ValidationError unless all four are finite and strictly positive.
  void validate() const;

  /// r + q, the discount rate inside the distress zone.
  double penalized_rate() const { return r + q; }
};

/// Which one-sided limit to report at a breakpoint.
enum class Side { Left, Right };

/// Roots of (sigma^2/2) g^2 + mu g - rho = 0.
struct Exponents {
  double gamma1 = 0.0;  ///< positive root
  double gamma2 = 0.0;  ///< negative root
  double rho = 0.0;
};

Exponents exponents(const ModelParams& params, double rho);

/// psi(x) = exp(gamma1 x), phi(x) = exp(gamma2 x) and their first two derivatives.
struct Basis {
  double psi, phi;
  double dpsi, dphi;
  double d2psi, d2phi;
};

Basis basis(const ModelParams& params, double rho, double x);
Basis basis(const Exponents& ex, double x);

/// Value and first two derivatives of a scalar function at a point.
struct Jet {
  double value;
  double d1;
  double d2;
};

/// delta(y) = psi_{r+q}(y) - phi_{r+q}(y).
Jet delta_fn(const ModelParams& params, double y);

/// eta(y; b) = psi_r'(b) phi_r(y) - phi_r'(b) psi_r(y); d1/d2 are derivatives in y.
Jet eta_fn(const ModelParams& params, double y, double b);

/// De Finetti solution for a single constant discount rate rho.
struct ClassicalSolution {
  double rho = 0.0;
  double barrier = 0.0;     ///< optimal reflection level b*_rho
  Exponents exponents;
  double normalizer = 0.0;  ///< gamma1 e^{gamma1 b} - gamma2 e^{gamma2 b}
};

ClassicalSolution classical_solve(const ModelParams& params, double rho);

double classical_value(const ClassicalSolution& sol, double x);
double classical_deriv(const ClassicalSolution& sol, double x, Side side = Side::Right);
double classical_second_deriv(const ClassicalSolution& sol, double x, Side side = Side::Right);

std::string to_string(const ModelParams& params);

}  // namespace omegadiv
