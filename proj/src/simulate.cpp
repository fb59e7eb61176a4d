#include "omegadiv/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include <Eigen/Dense>
#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include "omegadiv/errors.hpp"
#include "omegadiv/rng.hpp"
#include "omegadiv/value.hpp"

namespace omegadiv {

std::string to_string(Estimator e) {
  return e == Estimator::Killing ? "killing" : "discounting";
}

Estimator estimator_from_string(const std::string& name) {
  if (name == "killing") return Estimator::Killing;
  if (name == "discounting") return Estimator::Discounting;
  throw ValidationError("unknown estimator: " + name);
}

void PathConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be > 0");
  if (t_max < 0.0 || !std::isfinite(t_max)) throw ValidationError("t_max must be >= 0");
  if (t_max == 0.0 && !(bias_tol > 0.0)) throw ValidationError("bias_tol must be > 0");
  if (n_paths < 2) throw ValidationError("need at least two paths");
  if (!(cycle_time > 0.0) || !std::isfinite(cycle_time)) {
    throw ValidationError("cycle_time must be > 0");
  }
}

double PathConfig::horizon(const ModelParams& params, double x_max) const {
  if (t_max > 0.0) return t_max;
  const double scale = std::max(x_max, 0.0) + params.mu / params.r;
  return std::max(dt, std::log(2.0 * scale / bias_tol) / params.r);
}

namespace {

struct Kernel {
  double mu_dt;
  double s_sqdt;
  double y;
  double q_dt;
  double f_in;   // e^{-(r+q) dt}
  double f_out;  // e^{-r dt}
  Estimator estimator;
  Strategy strategy;

  Kernel(const ModelParams& p, double y_, const PathConfig& c, const Strategy& s)
      : mu_dt(p.mu * c.dt),
        s_sqdt(p.sigma * std::sqrt(c.dt)),
        y(y_),
        q_dt(p.q * c.dt),
        f_in(std::exp(-(p.r + p.q) * c.dt)),
        f_out(std::exp(-p.r * c.dt)),
        estimator(c.estimator),
        strategy(s) {}
};

struct Walk {
  double x = 0.0;
  double w = 1.0;      // discount weight at the current time
  double clock = 0.0;  // omega clock
  double kill_level = std::numeric_limits<double>::infinity();
  double reward = 0.0;
  double paid = 0.0;
  int phase = 1;       // 2 after the lump switch of a double barrier
  bool ruined = false;
  bool killed = false;
  bool switched = false;
  std::uint64_t steps = 0;
};

using Normal = boost::random::normal_distribution<double>;
using Expo = boost::random::exponential_distribution<double>;

double active_barrier(const Kernel& k, const Walk& w) {
  if (k.strategy.kind == Strategy::Kind::Single) return k.strategy.b;
  return w.phase == 1 ? k.strategy.b2 : k.strategy.b1;
}

void pay(Walk& w, double amount) {
  w.reward += w.w * amount;
  w.paid += amount;
}

/// Time-zero action for a start at x.
void start(const Kernel& k, Walk& w) {
  if (w.x <= 0.0) {
    w.ruined = true;
    return;
  }
  const Strategy& s = k.strategy;
  if (s.kind == Strategy::Kind::Double && w.phase == 1 && w.x <= s.c1) {
    pay(w, std::max(w.x - s.b1, 0.0));
    w.x = std::min(w.x, s.b1);
    w.phase = 2;
    w.switched = true;
    return;
  }
  const double top = active_barrier(k, w);
  if (w.x > top) {
    pay(w, w.x - top);
    w.x = top;
  }
}

/// Euler steps until ruin or killing, the step cap, or a payout at the active
/// barrier once `min_steps` have elapsed or the double barrier has switched.
/// Specialized per estimator and strategy kind to keep the loop tight.
template <Estimator E, bool Dbl>
void advance_impl(const Kernel& k, Walk& w, CounterRng& rng, Normal& normal,
                  std::uint64_t min_steps, std::uint64_t cap) {
  const double mu_dt = k.mu_dt;
  const double s_sqdt = k.s_sqdt;
  const double y = k.y;
  const double q_dt = k.q_dt;
  const double f_in = k.f_in;
  const double f_out = k.f_out;
  const double kill_level = w.kill_level;
  const double b1 = Dbl ? k.strategy.b1 : k.strategy.b;
  const double c1 = k.strategy.c1;
  const double b2 = k.strategy.b2;
  double x = w.x;
  double disc = w.w;
  double clock = w.clock;
  double reward = w.reward;
  double paid = w.paid;
  std::uint64_t steps = w.steps;
  int phase = w.phase;

  while (steps < cap) {
    const bool below = x < y;
    x += mu_dt + s_sqdt * normal(rng);
    ++steps;
    if constexpr (E == Estimator::Discounting) {
      disc *= below ? f_in : f_out;
      clock += below ? q_dt : 0.0;
    } else {
      disc *= f_out;
      if (below) {
        clock += q_dt;
        if (clock > kill_level) {
          w.killed = true;
          break;
        }
      }
    }
    if (x <= 0.0) {
      w.ruined = true;
      break;
    }
    if constexpr (Dbl) {
      if (phase == 1) {
        if (x <= c1) {
          const double lump = x > b1 ? x - b1 : 0.0;
          reward += disc * lump;
          paid += lump;
          x = x < b1 ? x : b1;
          phase = 2;
          w.switched = true;
          if (x == b1) break;
          continue;
        }
        if (x >= b2) {
          reward += disc * (x - b2);
          paid += x - b2;
          x = b2;
          if (steps >= min_steps) break;
        }
        continue;
      }
    }
    if (x >= b1) {
      reward += disc * (x - b1);
      paid += x - b1;
      x = b1;
      if (steps >= min_steps || w.switched) break;
    }
  }
  w.x = x;
  w.w = disc;
  w.clock = clock;
  w.reward = reward;
  w.paid = paid;
  w.steps = steps;
  w.phase = phase;
}

void advance(const Kernel& k, Walk& w, CounterRng& rng, Normal& normal, std::uint64_t min_steps,
             std::uint64_t cap) {
  const bool dbl = k.strategy.kind == Strategy::Kind::Double;
  if (k.estimator == Estimator::Discounting) {
    dbl ? advance_impl<Estimator::Discounting, true>(k, w, rng, normal, min_steps, cap)
        : advance_impl<Estimator::Discounting, false>(k, w, rng, normal, min_steps, cap);
  } else {
    dbl ? advance_impl<Estimator::Killing, true>(k, w, rng, normal, min_steps, cap)
        : advance_impl<Estimator::Killing, false>(k, w, rng, normal, min_steps, cap);
  }
}

constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

bool stopped(const Walk& w) { return w.ruined || w.killed; }

bool at_barrier(const Kernel& k, const Walk& w) { return w.x == active_barrier(k, w); }

/// Regeneration state of a finished walk: 0 for b (single) or b2 (double),
/// 1 for b1 (double); -1 when the walk ended without regenerating.
int state_of(const Kernel& k, const Walk& w, bool truncated) {
  if (stopped(w) || truncated || !at_barrier(k, w)) return -1;
  if (k.strategy.kind == Strategy::Kind::Single) return 0;
  return w.phase == 1 ? 0 : 1;
}

struct Piece {
  double reward = 0.0;
  double carry = 0.0;  // discount weight handed to the next state
  double clock = 0.0;
  int next = -1;
  bool ruined = false;
  bool killed = false;
  bool truncated = false;
  std::uint64_t steps = 0;
};

Piece finish(const Kernel& k, const Walk& w, bool truncated) {
  Piece p;
  p.reward = w.reward;
  p.clock = w.clock;
  p.next = state_of(k, w, truncated);
  p.carry = p.next >= 0 ? w.w : 0.0;
  p.ruined = w.ruined;
  p.killed = w.killed;
  p.truncated = truncated && !stopped(w);
  p.steps = w.steps;
  return p;
}

void draw_kill_level(const Kernel& k, Walk& w, CounterRng& rng) {
  if (k.estimator == Estimator::Killing) {
    Expo expo(1.0);
    w.kill_level = expo(rng);
  }
}

/// From x0 until the first barrier hit.
Piece run_segment(const Kernel& k, double x0, std::uint64_t cap, CounterRng& rng) {
  Normal normal(0.0, 1.0);
  Walk w;
  w.x = x0;
  draw_kill_level(k, w, rng);
  start(k, w);
  if (!stopped(w) && !at_barrier(k, w)) advance(k, w, rng, normal, 0, cap);
  return finish(k, w, w.steps >= cap && !at_barrier(k, w));
}

/// From a barrier state for at least `min_steps`, then to the next barrier hit.
Piece run_cycle(const Kernel& k, int state, std::uint64_t min_steps, std::uint64_t cap,
                CounterRng& rng) {
  Normal normal(0.0, 1.0);
  Walk w;
  if (k.strategy.kind == Strategy::Kind::Single) {
    w.x = k.strategy.b;
  } else {
    w.phase = state == 0 ? 1 : 2;
    w.x = state == 0 ? k.strategy.b2 : k.strategy.b1;
  }
  draw_kill_level(k, w, rng);
  while (!stopped(w) && w.steps < cap) {
    advance(k, w, rng, normal, min_steps, cap);
    if (at_barrier(k, w) && (w.steps >= min_steps || w.switched)) break;
  }
  return finish(k, w, w.steps >= cap && !at_barrier(k, w));
}

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  unsigned t = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  t = static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(1, n / 64)));
  constexpr std::size_t kBlock = 256;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t lo = next.fetch_add(kBlock);
      if (lo >= n) return;
      const std::size_t hi = std::min(n, lo + kBlock);
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    }
  };
  if (t <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < t; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_inputs(const Strategy& strategy, double x0, double y, const ModelParams& params,
                  const PathConfig& config) {
  params.validate();
  strategy.validate();
  config.validate();
  if (!(x0 >= 0.0) || !std::isfinite(x0)) throw ValidationError("x0 must be >= 0");
  if (!(y >= 0.0) || std::isnan(y)) throw ValidationError("distress threshold y must be >= 0");
}

}  // namespace

PathResult simulate_path(const Strategy& strategy, double x0, double y, const ModelParams& params,
                         const PathConfig& config, std::uint64_t path_index,
                         std::vector<TracePoint>* trace, std::size_t trace_every) {
  check_inputs(strategy, x0, y, params, config);
  const Kernel k(params, y, config, strategy);
  const double horizon = config.horizon(params, std::max(x0, strategy.top()));
  const auto cap = static_cast<std::uint64_t>(std::ceil(horizon / config.dt));
  CounterRng rng(config.seed, path_index, 0);
  Normal normal(0.0, 1.0);
  Walk w;
  w.x = x0;
  draw_kill_level(k, w, rng);
  if (trace) trace->push_back({0.0, w.x, 0.0, 0.0});
  start(k, w);
  const std::uint64_t every = trace ? std::max<std::size_t>(trace_every, 1) : cap;
  while (!stopped(w) && w.steps < cap) {
    const std::uint64_t next = std::min(cap, (w.steps / every + 1) * every);
    advance(k, w, rng, normal, kNever, next);
    if (trace && (w.steps % every == 0 || stopped(w))) {
      trace->push_back({static_cast<double>(w.steps) * config.dt, w.x, w.paid, w.clock});
    }
  }
  PathResult r;
  r.reward = w.reward;
  r.ruined = w.ruined;
  r.killed = w.killed;
  r.truncated = !stopped(w);
  r.clock = w.clock;
  r.t_end = static_cast<double>(w.steps) * config.dt;
  r.steps = w.steps;
  return r;
}

McEstimate mc_value_truncated(const Strategy& strategy, double x0, double y,
                              const ModelParams& params, const PathConfig& config) {
  check_inputs(strategy, x0, y, params, config);
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = config.n_paths;
  std::vector<PathResult> res(n);
  parallel_for(n, config.threads, [&](std::size_t i) {
    res[i] = simulate_path(strategy, x0, y, params, config, i);
  });
  McEstimate est;
  est.estimator = config.estimator;
  est.n_paths = n;
  double sum = 0.0;
  double clock = 0.0;
  for (const auto& r : res) {
    sum += r.reward;
    clock += r.clock;
    est.n_ruined += r.ruined;
    est.n_killed += r.killed;
    est.n_truncated += r.truncated;
    est.n_steps += r.steps;
  }
  est.mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (const auto& r : res) ss += (r.reward - est.mean) * (r.reward - est.mean);
  est.std_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  est.mean_clock_at_end = clock / static_cast<double>(n);
  est.seconds = seconds_since(t0);
  return est;
}

McEstimate mc_value(const Strategy& strategy, double x0, double y, const ModelParams& params,
                    const PathConfig& config) {
  check_inputs(strategy, x0, y, params, config);
  const auto t0 = std::chrono::steady_clock::now();
  const Kernel k(params, y, config, strategy);
  const int S = strategy.kind == Strategy::Kind::Single ? 1 : 2;
  const std::size_t n = config.n_paths;
  const double horizon = config.horizon(params, std::max(x0, strategy.top()));
  const auto cap = static_cast<std::uint64_t>(std::ceil(horizon / config.dt));
  const auto min_steps = static_cast<std::uint64_t>(std::ceil(config.cycle_time / config.dt));

  std::vector<Piece> seg(n);
  std::vector<std::vector<Piece>> cyc(S, std::vector<Piece>(n));
  parallel_for(n, config.threads, [&](std::size_t i) {
    CounterRng rs(config.seed, i, 0);
    seg[i] = run_segment(k, x0, cap, rs);
    for (int s = 0; s < S; ++s) {
      CounterRng rc(config.seed, i, static_cast<std::uint64_t>(1 + s));
      cyc[s][i] = run_cycle(k, s, min_steps, cap, rc);
    }
  });

  const double dn = static_cast<double>(n);
  double a0 = 0.0;
  Eigen::VectorXd m0 = Eigen::VectorXd::Zero(S);
  Eigen::VectorXd aS = Eigen::VectorXd::Zero(S);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(S, S);
  McEstimate est;
  est.estimator = config.estimator;
  est.n_paths = n;
  double clock = 0.0;
  auto tally = [&](const Piece& p) {
    est.n_ruined += p.ruined;
    est.n_killed += p.killed;
    est.n_truncated += p.truncated;
    est.n_steps += p.steps;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const Piece& p = seg[i];
    a0 += p.reward;
    if (p.next >= 0) m0(p.next) += p.carry;
    clock += p.clock;
    tally(p);
    for (int s = 0; s < S; ++s) {
      const Piece& c = cyc[s][i];
      aS(s) += c.reward;
      if (c.next >= 0) M(s, c.next) += c.carry;
      tally(c);
    }
  }
  a0 /= dn;
  m0 /= dn;
  aS /= dn;
  M /= dn;

  const Eigen::MatrixXd I_M = Eigen::MatrixXd::Identity(S, S) - M;
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(I_M);
  if (!lu.isInvertible()) throw ConsistencyError("regeneration system is singular");
  const Eigen::VectorXd J = lu.solve(aS);
  const Eigen::VectorXd u = I_M.transpose().fullPivLu().solve(m0);
  est.mean = a0 + m0.dot(J);

  // Delta-method variance: segments and cycles are independent samples.
  auto contribution = [&](const Piece& p) { return p.reward + (p.next >= 0 ? p.carry * J(p.next) : 0.0); };
  auto sample_var = [&](auto&& value_of) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += value_of(i);
    mean /= dn;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = value_of(i) - mean;
      ss += d * d;
    }
    return ss / (dn - 1.0);
  };
  double var = sample_var([&](std::size_t i) { return contribution(seg[i]); }) / dn;
  for (int s = 0; s < S; ++s) {
    var += u(s) * u(s) * sample_var([&](std::size_t i) { return contribution(cyc[s][i]); }) / dn;
  }
  est.std_error = std::sqrt(var);
  est.mean_clock_at_end = clock / dn;
  est.seconds = seconds_since(t0);
  return est;
}

Strategy strategy_from_solution(const RegimeSolution& solution) {
  if (solution.critical) {
    return Strategy::double_barrier(solution.critical->b_low_fixed, solution.critical->b_low_free,
                                    solution.critical->b_up_free);
  }
  if (solution.action.empty()) throw ValidationError("solution has no action region");
  return Strategy::single(solution.action.front().lo);
}

}  // namespace omegadiv
