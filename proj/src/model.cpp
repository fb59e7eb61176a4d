#include "omegadiv/model.hpp"

#include <cmath>
#include <sstream>

#include "omegadiv/errors.hpp"

namespace omegadiv {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

void require_rate(double rho) {
  if (!positive_finite(rho)) {
    std::ostringstream os;
    os << "discount rate must be positive and finite, got " << rho;
    throw ValidationError(os.str());
  }
}

}  // namespace

void ModelParams::validate() const {
  if (!positive_finite(mu) || !positive_finite(sigma) || !positive_finite(r) ||
      !positive_finite(q)) {
    throw ValidationError("model parameters must be positive and finite: " + to_string(*this));
  }
}

Exponents exponents(const ModelParams& params, double rho) {
  params.validate();
  require_rate(rho);
  const double s2 = params.sigma * params.sigma;
  const double m = params.mu / s2;
  const double root = std::sqrt(m * m + 2.0 * rho / s2);
  // gamma1 = root - m loses digits when rho is small; use the conjugate form.
  const double gamma1 = (2.0 * rho / s2) / (root + m);
  const double gamma2 = -root - m;
  return Exponents{gamma1, gamma2, rho};
}

Basis basis(const Exponents& ex, double x) {
  const double psi = std::exp(ex.gamma1 * x);
  const double phi = std::exp(ex.gamma2 * x);
  return Basis{psi,
               phi,
               ex.gamma1 * psi,
               ex.gamma2 * phi,
               ex.gamma1 * ex.gamma1 * psi,
               ex.gamma2 * ex.gamma2 * phi};
}

Basis basis(const ModelParams& params, double rho, double x) {
  return basis(exponents(params, rho), x);
}

Jet delta_fn(const ModelParams& params, double y) {
  if (!(y >= 0.0)) throw ValidationError("delta_fn requires y >= 0");
  const Basis b = basis(params, params.penalized_rate(), y);
  return Jet{b.psi - b.phi, b.dpsi - b.dphi, b.d2psi - b.d2phi};
}

Jet eta_fn(const ModelParams& params, double y, double b) {
  if (!(y >= 0.0) || !(b >= 0.0)) throw ValidationError("eta_fn requires y, b >= 0");
  const Exponents ex = exponents(params, params.r);
  const Basis at_b = basis(ex, b);
  const Basis at_y = basis(ex, y);
  return Jet{at_b.dpsi * at_y.phi - at_b.dphi * at_y.psi,
             at_b.dpsi * at_y.dphi - at_b.dphi * at_y.dpsi,
             at_b.dpsi * at_y.d2phi - at_b.dphi * at_y.d2psi};
}

ClassicalSolution classical_solve(const ModelParams& params, double rho) {
  const Exponents ex = exponents(params, rho);
  const double g1 = ex.gamma1;
  const double g2 = ex.gamma2;
  // log(g2^2 / g1^2) written as 2 log(-g2 / g1).
  const double barrier = 2.0 * std::log(-g2 / g1) / (g1 - g2);
  const double normalizer = g1 * std::exp(g1 * barrier) - g2 * std::exp(g2 * barrier);
  return ClassicalSolution{rho, barrier, ex, normalizer};
}

double classical_value(const ClassicalSolution& sol, double x) {
  if (!(x >= 0.0)) throw ValidationError("classical_value requires x >= 0");
  const auto& ex = sol.exponents;
  if (x < sol.barrier) {
    return (std::exp(ex.gamma1 * x) - std::exp(ex.gamma2 * x)) / sol.normalizer;
  }
  const double at_barrier =
      (std::exp(ex.gamma1 * sol.barrier) - std::exp(ex.gamma2 * sol.barrier)) / sol.normalizer;
  return at_barrier + (x - sol.barrier);
}

double classical_deriv(const ClassicalSolution& sol, double x, Side side) {
  if (!(x >= 0.0)) throw ValidationError("classical_deriv requires x >= 0");
  const auto& ex = sol.exponents;
  const bool inside = side == Side::Left ? x <= sol.barrier : x < sol.barrier;
  if (inside) {
    return (ex.gamma1 * std::exp(ex.gamma1 * x) - ex.gamma2 * std::exp(ex.gamma2 * x)) /
           sol.normalizer;
  }
  return 1.0;
}

double classical_second_deriv(const ClassicalSolution& sol, double x, Side side) {
  if (!(x >= 0.0)) throw ValidationError("classical_second_deriv requires x >= 0");
  const auto& ex = sol.exponents;
  const bool inside = side == Side::Left ? x <= sol.barrier : x < sol.barrier;
  if (inside) {
    return (ex.gamma1 * ex.gamma1 * std::exp(ex.gamma1 * x) -
            ex.gamma2 * ex.gamma2 * std::exp(ex.gamma2 * x)) /
           sol.normalizer;
  }
  return 0.0;
}

std::string to_string(const ModelParams& params) {
  std::ostringstream os;
  os.precision(10);
  os << "(mu=" << params.mu << ", sigma=" << params.sigma << ", r=" << params.r
     << ", q=" << params.q << ")";
  return os.str();
}

}  // namespace omegadiv
