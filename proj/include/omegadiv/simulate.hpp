#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "omegadiv/model.hpp"
#include "omegadiv/strategy.hpp"

namespace omegadiv {

struct RegimeSolution;

/// Discounting weights dividends by e^{-r t - omega_t}. Killing weights by
/// e^{-r t} and stops the path once omega_t exceeds an independent Exp(1) level.
enum class Estimator { Killing, Discounting };

std::string to_string(Estimator e);
Estimator estimator_from_string(const std::string& name);

struct PathConfig {
  double dt = 1e-4;             ///< years per Euler step
  double t_max = 0.0;           ///< horizon cap in years; 0 derives it from `bias_tol`
  double bias_tol = 1e-3;       ///< target for the truncation bias bound
  std::uint64_t seed = 20240607;
  std::size_t n_paths = 200000;
  Estimator estimator = Estimator::Discounting;
  double cycle_time = 1.0;      ///< minimum length of a regeneration cycle, years
  unsigned threads = 0;         ///< 0 uses the hardware concurrency

  void validate() const;

  /// t_max, or the smallest horizon with e^{-r t}(x_max + mu/r) <= bias_tol / 2.
  double horizon(const ModelParams& params, double x_max) const;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_paths = 0;
  std::size_t n_ruined = 0;       ///< segments or cycles ending in ruin
  std::size_t n_killed = 0;       ///< Killing estimator only
  std::size_t n_truncated = 0;    ///< segments or cycles that hit t_max
  double mean_clock_at_end = 0.0; ///< mean omega clock over initial segments
  std::uint64_t n_steps = 0;
  double seconds = 0.0;
  Estimator estimator = Estimator::Discounting;
};

struct TracePoint {
  double t;
  double x;
  double dividends;  ///< cumulative undiscounted payout
  double clock;      ///< omega_t
};

struct PathResult {
  double reward = 0.0;  ///< discounted (or killed) dividend total
  bool ruined = false;
  bool killed = false;
  bool truncated = false;
  double clock = 0.0;
  double t_end = 0.0;
  std::uint64_t steps = 0;
};

/// One Euler path from x0 until ruin, killing or the horizon.
/// `trace`, when given, receives a point every `trace_every` steps.
PathResult simulate_path(const Strategy& strategy, double x0, double y, const ModelParams& params,
                         const PathConfig& config, std::uint64_t path_index,
                         std::vector<TracePoint>* trace = nullptr,
                         std::size_t trace_every = 100);

/// Plain average of simulate_path over n_paths. Cost grows with the horizon,
/// which makes it practical only for short horizons or large dt.
McEstimate mc_value_truncated(const Strategy& strategy, double x0, double y,
                              const ModelParams& params, const PathConfig& config);

/// Regenerative estimator. Each path contributes one segment from x0 to the
/// first barrier hit, plus one cycle from every barrier state. A cycle runs at
/// least `cycle_time` and ends at the next barrier hit, so J at the barrier
/// states solves a small linear system. Paths are reduced in index order.
McEstimate mc_value(const Strategy& strategy, double x0, double y, const ModelParams& params,
                    const PathConfig& config);

Strategy strategy_from_solution(const RegimeSolution& solution);

}  // namespace omegadiv
