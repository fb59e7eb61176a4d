#pragma once

#include <string>
#include <vector>

namespace omegadiv {

/// Barrier dividend policy.
///   Single: reflect at b (lump payment down to b at time 0 if above).
///   Double: reflect at b2 until the surplus first drops to c1 or below, pay a
///           lump down to b1 there, then reflect at b1 forever.
struct Strategy {
  enum class Kind { Single, Double };

  Kind kind = Kind::Single;
  double b = 0.0;  ///< single barrier
  double b1 = 0.0;
  double c1 = 0.0;
  double b2 = 0.0;

  static Strategy single(double barrier);
  static Strategy double_barrier(double lower, double jump_edge, double upper);

  /// Throws ValidationError unless 0 < b, or 0 < b1 < c1 < b2.
  void validate() const;

  /// Highest barrier in force before any switch (b or b2).
  double top() const { return kind == Kind::Single ? b : b2; }
};

std::string to_string(const Strategy& s);

struct Perturbation {
  std::string label;  ///< e.g. "b1-0.2"
  Strategy strategy;
};

/// Every free boundary moved by -delta and +delta, one at a time. Moves that
/// break the ordering or positivity are dropped.
std::vector<Perturbation> perturb_boundaries(const Strategy& s, double delta);

}  // namespace omegadiv
