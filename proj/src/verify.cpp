#include "omegadiv/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "omegadiv/critical.hpp"
#include "omegadiv/errors.hpp"
#include "omegadiv/subcritical.hpp"

namespace omegadiv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Tracks the largest violation and where it happened.
struct Worst {
  double value = -kInf;
  double at = 0.0;
  std::size_t n = 0;

  void take(double v, double x) {
    ++n;
    if (v > value || std::isnan(v)) {
      value = std::isnan(v) ? kInf : v;
      at = x;
    }
  }
};

CheckRecord make_record(const std::string& name, const Worst& w, double tol,
                        const std::string& detail) {
  CheckRecord rec;
  rec.name = name;
  rec.grid_size = w.n;
  rec.worst = w.value;
  rec.worst_location = w.at;
  rec.tolerance = tol;
  rec.pass = w.value <= tol;
  rec.detail = detail;
  return rec;
}

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

std::vector<double> knots_of(const RegimeSolution& sol) {
  std::vector<double> k = sol.pieces.breakpoints();
  if (sol.y > 0.0 && std::isfinite(sol.y)) k.push_back(sol.y);
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  return k;
}

bool near_any(double x, const std::vector<double>& pts, double band) {
  return std::any_of(pts.begin(), pts.end(), [&](double p) { return std::abs(x - p) <= band; });
}

std::vector<double> linspace_open(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 1; i <= n; ++i) v.push_back(a + (b - a) * i / (n + 1));
  return v;
}

}  // namespace

bool VerifyReport::pass() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

std::vector<double> verification_grid(const RegimeSolution& sol, const VerifyOptions& opt) {
  const std::vector<double> knots = knots_of(sol);
  const double top = knots.empty() ? 1.0 : knots.back();
  const double x_max = opt.x_max > 0.0 ? opt.x_max : std::max(2.0 * top, top + 2.0);

  std::vector<double> ends{0.0};
  for (double k : knots)
    if (k < x_max) ends.push_back(k);
  ends.push_back(x_max);

  const int n_log = 25;
  std::vector<double> grid;
  const Eigen::ArrayXd offsets =
      Eigen::ArrayXd::LinSpaced(n_log, std::log10(opt.band) + 0.05, -3.0).unaryExpr(
          [](double e) { return std::pow(10.0, e); });
  for (std::size_t s = 0; s + 1 < ends.size(); ++s) {
    const double a = ends[s];
    const double c = ends[s + 1];
    const Eigen::ArrayXd uniform = Eigen::ArrayXd::LinSpaced(static_cast<Eigen::Index>(opt.grid_n), a, c);
    grid.insert(grid.end(), uniform.begin(), uniform.end());
    for (double d : offsets) {
      if (d < 0.5 * (c - a)) {
        if (s > 0) grid.push_back(a + d);
        grid.push_back(c - d);
      }
    }
  }
  std::vector<double> out;
  for (double x : grid) {
    if (x > 0.0 && x <= x_max && !near_any(x, knots, opt.band)) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CheckRecord check_gradient(const RegimeSolution& sol, const std::vector<double>& grid, double tol) {
  Worst w;
  for (double x : grid) {
    const double d = deriv_at(sol, x);
    w.take(1.0 - d, x);
    if (sol.in_action_region(x)) w.take(std::abs(d - 1.0), x);
  }
  return make_record("gradient", w, tol, "max of 1 - w'(x), and |w'(x) - 1| in the action region");
}

CheckRecord check_generator(const RegimeSolution& sol, const std::vector<double>& grid, double tol) {
  const ModelParams& p = sol.params;
  const double half_s2 = 0.5 * p.sigma * p.sigma;
  Worst w;
  for (double x : grid) {
    const double rho = x < sol.y ? p.r + p.q : p.r;
    const double v = value_at(sol, x);
    const double d1 = deriv_at(sol, x);
    const double d2 = second_deriv_at(sol, x);
    const double scale =
        std::max(1.0, std::abs(half_s2 * d2) + std::abs(p.mu * d1) + std::abs(rho * v));
    const double g = (half_s2 * d2 + p.mu * d1 - rho * v) / scale;
    w.take(g, x);
    if (!sol.in_action_region(x)) w.take(std::abs(g), x);
  }
  return make_record("generator", w, tol,
                     "max of the scaled generator residual, and its absolute value in the waiting "
                     "region");
}

CheckRecord check_regularity(const RegimeSolution& sol, double tol) {
  const ModelParams& p = sol.params;
  const double s2 = p.sigma * p.sigma;
  const std::vector<double> exceptions = sol.c2_exceptions();
  Worst w;
  for (double b : sol.pieces.breakpoints()) {
    const auto& left = sol.pieces.segments()[sol.pieces.segment_index(b, Side::Left)];
    const auto& right = sol.pieces.segments()[sol.pieces.segment_index(b, Side::Right)];
    w.take(rel_diff(left.value(b), right.value(b)), b);
    w.take(rel_diff(left.deriv(b), right.deriv(b)), b);
    const double l2 = left.second_deriv(b);
    const double r2 = right.second_deriv(b);
    const bool allowed_jump =
        std::any_of(exceptions.begin(), exceptions.end(), [&](double e) { return e == b; });
    if (!allowed_jump) {
      w.take(rel_diff(l2, r2), b);
    } else if (b == sol.y) {
      // Only the discount rate changes across y, so the ODEs fix the jump.
      w.take(rel_diff(l2 - r2, 2.0 * p.q * right.value(b) / s2), b);
    } else {
      // Lower free boundary: flat to the left, convex to the right.
      const double expected = 2.0 / s2 * (-p.mu + (p.r + p.q) * right.value(b));
      w.take(std::abs(l2) / std::max(1.0, std::abs(r2)), b);
      w.take(rel_diff(r2, expected), b);
      if (!(r2 > 0.0)) w.take(kInf, b);
    }
  }
  if (w.n == 0) w.take(0.0, 0.0);
  return make_record("regularity", w, tol,
                     "relative one-sided mismatch of value, slope and curvature at breakpoints");
}

CheckRecord check_fd_consistency(const RegimeSolution& sol, const std::vector<double>& grid,
                                 double step, double tol) {
  Worst w;
  for (std::size_t i = 0; i < grid.size(); i += 7) {
    const double x = grid[i];
    if (x <= step) continue;
    const double fd = (value_at(sol, x + step) - value_at(sol, x - step)) / (2.0 * step);
    w.take(rel_diff(fd, deriv_at(sol, x)), x);
  }
  if (w.n == 0) w.take(0.0, 0.0);
  return make_record("finite_difference_slope", w, tol,
                     "relative gap between central differences and the closed-form slope");
}

namespace {

/// Collects strict inequalities (margin > 0) and tolerance checks. The
/// recorded violation is -margin or err - tol.
struct Margin {
  Worst w;
  bool ok = true;
  void need_positive(double m, double x) {
    ok = ok && m > 0.0;
    w.take(-m, x);
  }
  void need_close(double err, double tol, double x) {
    ok = ok && err <= tol;
    w.take(err - tol, x);
  }
};

CheckRecord margin_record(const std::string& name, const Margin& m, const std::string& detail) {
  CheckRecord rec = make_record(name, m.w, 0.0, detail);
  rec.pass = m.ok && m.w.n > 0;
  return rec;
}

double gap_of(const ModelParams& p, double y) { return subcritical_barrier(p, y).gap; }

}  // namespace

std::vector<CheckRecord> check_auxiliary_properties(const ModelParams& params) {
  const RegimeSeparators sep = separators(params);
  const double brq = sep.b_classical_penalized;
  const double br = sep.b_classical_base;
  const double yl = sep.y_lower;
  const double yu = sep.y_upper;
  const Exponents base = exponents(params, params.r);
  const double g1 = base.gamma1;
  const double g2 = base.gamma2;
  const int n = 100;

  std::vector<double> y_all;  // (0, yu]
  for (int k = 1; k <= n; ++k) y_all.push_back(yu * k / n);
  const std::vector<double> y_mid = linspace_open(yl, yu, n);  // (yl, yu)

  std::vector<CheckRecord> out;

  {
    Margin m;
    m.need_positive(br - brq, br);
    for (double y : y_all) m.need_positive(subcritical_barrier(params, y).barrier - br, y);
    out.push_back(margin_record("barrier_ordering", m, "b*_{r+q} < b*_r < b*(y) for y in (0, y_u]"));
  }
  {
    Margin m;
    const Exponents pen = exponents(params, params.penalized_rate());
    const double scale = pen.gamma1 * pen.gamma1 * std::exp(pen.gamma1 * brq) +
                         pen.gamma2 * pen.gamma2 * std::exp(pen.gamma2 * brq);
    m.need_close(std::abs(delta_fn(params, brq).d2) / scale, 1e-12, brq);
    for (int k = 1; k <= 2 * n; ++k) {
      const double x = 2.0 * yu * k / (2 * n);
      if (std::abs(x - brq) < 1e-9) continue;
      const double d2 = delta_fn(params, x).d2;
      m.need_positive(x > brq ? d2 : -d2, x);
    }
    out.push_back(margin_record("delta_inflection",
                                m, "delta'' vanishes at b*_{r+q} and is positive exactly above it"));
  }
  {
    Margin m;
    const double d1b = delta_fn(params, brq).d1;
    for (int k = 1; k <= n; ++k) {
      const double x = brq + 2.0 * yu * k / n;
      m.need_positive(delta_fn(params, x).d1 / d1b - 1.0, x);
    }
    const Jet du = delta_fn(params, yu);
    const double mr = params.mu / params.r;
    m.need_positive(mr - du.value / du.d1, yu);
    m.need_positive(du.value / d1b - mr, yu);
    out.push_back(margin_record("delta_ratio_bounds", m,
                                "delta'(x) > delta'(b*_{r+q}) above it; delta(y_u)/delta'(y_u) < "
                                "mu/r < delta(y_u)/delta'(b*_{r+q})"));
  }
  {
    Margin m;
    m.need_positive(gap_of(params, yu), yu);
    const double h = 1e-5;
    for (double y : y_all) {
      const double slope = subcritical_gap_slope(params, y);
      m.need_positive(-slope, y);
      m.need_positive(slope + 1.0, y);
      if (y > h) {
        const double fd = (gap_of(params, y + h) - gap_of(params, y - h)) / (2.0 * h);
        m.need_close(std::abs(fd - slope), 1e-8, y);
      }
    }
    out.push_back(margin_record("gap_slope_bounds", m, "gap(y_u) > 0 and -1 < gap'(y) < 0"));
  }
  {
    Margin m;
    for (double y : y_all) {
      const SubcriticalSolution s = subcritical_coeffs(params, y);
      m.need_positive(s.k3, y);
      m.need_positive(-s.k4, y);
    }
    out.push_back(margin_record("k3_k4_signs", m, "k3 > 0 and k4 < 0 on (0, y_u]"));
  }
  {
    Margin m;
    const double d1b = delta_fn(params, brq).d1;
    for (double y : y_all) {
      const SubcriticalSolution s = subcritical_coeffs(params, y);
      m.need_positive(s.k1, y);
      const Jet d = delta_fn(params, y);
      const double ratio = g2 * g2 / (g1 * g1) * (d.d1 - g1 * d.value) / (d.d1 - g2 * d.value);
      const double product =
          std::pow(ratio, g1 / (g1 - g2)) * (g1 / -g2 * d.d1 + g1 * d.value);
      m.need_close(rel_diff(s.k1, 1.0 / product), 1e-9, y);
    }
    const double h = 1e-6;
    for (double y : linspace_open(brq, yu, n)) {
      const double slope =
          (subcritical_coeffs(params, y + h).k1 - subcritical_coeffs(params, y - h).k1) / (2 * h);
      m.need_positive(-slope, y);
    }
    m.need_positive(1.0 - subcritical_coeffs(params, yu).k1 * d1b, yu);
    out.push_back(margin_record(
        "k1_shape", m,
        "k1 > 0, matches its product form, decreases above b*_{r+q}, k1(y_u) delta'(b*_{r+q}) < 1"));
  }
  {
    Margin m;
    for (int i = 0; i <= 50; ++i) {
      const double y = yl + (yu - yl) * i / 50.0;
      for (int j = 0; j <= 25; ++j) {
        const double b = std::min(y, brq + (y - brq) * j / 25.0);
        const CoeffQuad c = e_coeffs(params, b, y);
        m.need_positive(c.e3, y);
        m.need_positive(-c.e4, y);
      }
    }
    out.push_back(margin_record("e3_e4_signs", m, "e3 > 0 and e4 < 0 for b*_{r+q} <= b <= y"));
  }
  {
    Margin m;
    m.need_close(std::abs(H_fn(params, brq, yl) - 1.0), 1e-9, yl);
    out.push_back(margin_record("H_lower_corner", m, "|H(b*_{r+q}, y_l) - 1| <= 1e-9"));
  }
  {
    Margin m;
    m.need_close(std::abs(H_fn(params, yu, yu) - 1.0), 1e-9, yu);
    out.push_back(margin_record("H_upper_corner", m, "|H(y_u, y_u) - 1| <= 1e-9"));
  }
  {
    Margin m;
    double prev = log_H(params, brq, y_mid.front());
    for (std::size_t i = 1; i < y_mid.size(); ++i) {
      const double cur = log_H(params, brq, y_mid[i]);
      m.need_positive(cur - prev, y_mid[i]);
      prev = cur;
    }
    out.push_back(margin_record("H_fixed_barrier_increasing", m,
                                "y -> H(b*_{r+q}, y) strictly increasing on (y_l, y_u)"));
  }
  {
    Margin m;
    double prev = log_H(params, y_mid.front(), y_mid.front());
    for (std::size_t i = 1; i < y_mid.size(); ++i) {
      const double cur = log_H(params, y_mid[i], y_mid[i]);
      m.need_positive(cur - prev, y_mid[i]);
      prev = cur;
    }
    out.push_back(margin_record("H_diagonal_increasing", m,
                                "y -> H(y, y) strictly increasing on (y_l, y_u)"));
  }
  {
    Margin m;
    const double y = 0.5 * (yl + yu);
    // -e4/e3 flattens to within rounding of a constant far below y, so
    // monotonicity is checked up to 1e-12 relative plus a strict overall drop.
    double prev_ratio = kInf;
    double prev_e3 = kInf;
    double first_ratio = 0.0;
    double last_ratio = 0.0;
    for (int j = 0; j <= 50; ++j) {
      const double b = std::min(y, brq + (y - brq) * j / 50.0);
      const CoeffQuad c = e_coeffs(params, b, y);
      const double ratio = -c.e4 / c.e3;
      if (j == 0) first_ratio = ratio;
      last_ratio = ratio;
      m.need_close(std::max(0.0, (ratio - prev_ratio) / ratio), 1e-12, b);
      m.need_positive(prev_e3 - c.e3, b);
      prev_ratio = ratio;
      prev_e3 = c.e3;
    }
    m.need_positive(first_ratio - last_ratio, y);
    auto upper_gap = [&](double yy) {
      const CoeffQuad c = e_coeffs(params, yy, yy);
      return (2.0 * std::log(-g2 / g1) + std::log(-c.e4 / c.e3)) / (g1 - g2) - yy;
    };
    double prev = kInf;
    for (double yy : y_mid) {
      const double cur = upper_gap(yy);
      m.need_positive(prev - cur, yy);
      prev = cur;
    }
    m.need_close(std::abs(upper_gap(yu)), 1e-8, yu);
    out.push_back(margin_record("upper_boundary_shape", m,
                                "-e4/e3 and e3 decrease in b; the diagonal upper-boundary gap "
                                "decreases in y and vanishes at y_u"));
  }
  {
    // Solutions of the constant-rate ODE started with f >= 0, f' > 0 increase
    // and can only turn from concave to convex.
    Margin m;
    for (double rho : {params.r, params.penalized_rate()}) {
      const Exponents ex = exponents(params, rho);
      for (double z0 : {0.0, 0.5, 2.0}) {
        for (double z1 : {0.1, 1.0, 5.0}) {
          const Segment f = exp_segment_from_jet(ex, RateTag::Base, 0.0, z0, z1);
          bool convex_seen = false;
          for (int k = 1; k <= 200; ++k) {
            const double x = 5.0 * k / 200.0;
            m.need_positive(f.deriv(x), x);
            const double d2 = f.second_deriv(x);
            if (d2 > 0.0) convex_seen = true;
            if (convex_seen && d2 < -1e-12 * std::abs(f.value(x))) m.need_positive(d2, x);
          }
        }
      }
    }
    out.push_back(margin_record("ode_solution_shape", m,
                                "increasing, and concave-to-convex only, from f >= 0, f' > 0"));
  }
  return out;
}

VerifyReport verify(const RegimeSolution& sol, const VerifyOptions& opt) {
  VerifyReport report;
  report.params = sol.params;
  report.y = sol.y;
  report.regime = sol.regime;
  report.candidate = sol.candidate;
  const std::vector<double> grid = verification_grid(sol, opt);
  report.checks.push_back(check_gradient(sol, grid, opt.tol));
  report.checks.push_back(check_generator(sol, grid, opt.tol));
  report.checks.push_back(check_regularity(sol, opt.tol));
  report.checks.push_back(check_fd_consistency(sol, grid, opt.fd_step, opt.fd_tol));
  if (opt.auxiliary) {
    for (CheckRecord& rec : check_auxiliary_properties(sol.params)) {
      report.checks.push_back(std::move(rec));
    }
  }
  return report;
}

}  // namespace omegadiv
