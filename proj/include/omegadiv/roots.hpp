#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "omegadiv/errors.hpp"

namespace omegadiv {

/// Root of a continuous f on [lo, hi] given a sign change.
/// Bisects until the bracket is narrower than `width`, then takes one secant
/// step on the final bracket. Throws ConsistencyError when the endpoints do not
/// bracket a root.
template <class F>
double bracketed_root(F&& f, double lo, double hi, const std::string& what,
                      double width = 1e-12) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(std::signbit(flo) != std::signbit(fhi)) || !std::isfinite(flo) || !std::isfinite(fhi)) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": no sign change on [" << lo << ", " << hi << "] (f = " << flo << ", "
       << fhi << ")";
    throw ConsistencyError(os.str());
  }
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  const double secant = lo - flo * (hi - lo) / (fhi - flo);
  if (secant >= lo && secant <= hi && std::isfinite(secant)) return secant;
  return 0.5 * (lo + hi);
}

}  // namespace omegadiv
