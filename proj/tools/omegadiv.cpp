// omegadiv: solve, verify, sweep and simulate the omega-clock dividend problem.
//
// Exit codes: 0 ok, 1 failed check or internal inconsistency, 2 usage or validation error.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "json.hpp"
#include "omegadiv/errors.hpp"
#include "omegadiv/serialize.hpp"
#include "omegadiv/simulate.hpp"
#include "omegadiv/strategy_value.hpp"
#include "omegadiv/value.hpp"
#include "omegadiv/verify.hpp"

using namespace omegadiv;
using nlohmann::json;

namespace {

struct CliConfig {
  ModelParams params;
  std::vector<double> y;
  std::vector<double> x;
  double x_max = 0.0;
  std::size_t grid_n = 0;
  std::size_t y_points = 400;
  std::string out;
  std::string boundaries_out;
  std::string format = "text";
  std::string candidate = "auto";
  double tol = 1e-9;
  bool auxiliary = true;
  double dt = 1e-4;
  std::size_t paths = 200000;
  std::uint64_t seed = 20240607;
  std::string estimator = "discounting";
  double perturb = 0.0;
  unsigned threads = 0;
  std::size_t trace = 0;
  std::string trace_out = "trace.csv";
};

/// One distress threshold inside each regime for the given parameters.
std::vector<double> reference_thresholds(const ModelParams& p) {
  const RegimeSeparators s = separators(p);
  return {0.9 * s.y_lower, 0.9 * s.y_lower + 0.1 * s.y_upper, 1.001 * s.y_upper};
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  const Eigen::ArrayXd v = Eigen::ArrayXd::LinSpaced(static_cast<Eigen::Index>(n), lo, hi);
  return {v.data(), v.data() + v.size()};
}

/// Writes to --out when given, stdout otherwise.
void emit(const CliConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw ValidationError("cannot open output file " + cfg.out);
  f << text;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string describe_solution(const RegimeSolution& sol) {
  std::ostringstream os;
  os << std::setprecision(10);
  os << "params      " << to_string(sol.params) << "\n"
     << "y           " << sol.y << "\n"
     << "regime      " << to_string(sol.regime) << "\n"
     << "candidate   " << to_string(sol.candidate) << "\n"
     << "y_lower     " << sol.separators.y_lower << "\n"
     << "y_upper     " << sol.separators.y_upper << "\n"
     << "b*_{r+q}    " << sol.separators.b_classical_penalized << "\n"
     << "b*_r        " << sol.separators.b_classical_base << "\n"
     << "action      ";
  for (std::size_t i = 0; i < sol.action.size(); ++i) {
    const Interval& iv = sol.action[i];
    os << (i ? " U " : "") << "[" << iv.lo << ", " << (std::isfinite(iv.hi) ? fmt(iv.hi) : "inf")
       << (std::isfinite(iv.hi) ? "]" : ")");
  }
  os << "\n";
  if (sol.subcritical) {
    const SubcriticalSolution& s = *sol.subcritical;
    os << "K1..K4      " << s.k1 << "  " << s.k2 << "  " << s.k3 << "  " << s.k4 << "\n";
  }
  if (sol.critical) {
    const CriticalSolution& c = *sol.critical;
    os << "E1..E4      " << c.ee1 << "  " << c.ee2 << "  " << c.ee3 << "  " << c.ee4 << "\n";
  }
  os << "segments\n";
  os << "  " << std::left << std::setw(18) << "from" << std::setw(8) << "kind" << std::setw(6)
     << "rate" << std::setw(20) << "coeff1" << "coeff2\n";
  const auto& bp = sol.pieces.breakpoints();
  const auto& segs = sol.pieces.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Segment& s = segs[i];
    const double from = i == 0 ? 0.0 : bp[i - 1];
    os << "  " << std::setw(18) << fmt(from) << std::setw(8)
       << (s.kind == SegmentKind::Exp ? "exp" : "affine") << std::setw(6)
       << (s.kind == SegmentKind::Affine ? "-" : s.rate == RateTag::Penalized ? "r+q" : "r")
       << std::setw(20) << fmt(s.coeff1) << fmt(s.coeff2) << "\n";
  }
  os << std::right;
  return os.str();
}

int cmd_solve(const CliConfig& cfg) {
  const Candidate cand = candidate_from_string(cfg.candidate);
  const std::vector<double> ys = cfg.y.empty() ? reference_thresholds(cfg.params) : cfg.y;
  std::vector<RegimeSolution> sols;
  for (double y : ys) sols.push_back(solve(cfg.params, y, cand));

  if (cfg.format == "json") {
    json doc = json::array();
    for (const auto& s : sols) {
      json j = to_json(s);
      if (!cfg.x.empty()) {
        json pts = json::array();
        for (double x : cfg.x) pts.push_back({{"x", x}, {"V", value_at(s, x)}, {"dV", deriv_at(s, x)}});
        j["evaluations"] = pts;
      }
      doc.push_back(j);
    }
    emit(cfg, (sols.size() == 1 ? doc.front() : doc).dump(2) + "\n");
  } else if (cfg.format == "csv") {
    std::ostringstream os;
    os << std::setprecision(17) << "y,x,V,dV,regime\n";
    for (const auto& s : sols) {
      const double top = s.pieces.breakpoints().empty() ? 1.0 : s.pieces.breakpoints().back();
      const double x_max = cfg.x_max > 0 ? cfg.x_max : std::max(2.0 * top, top + 2.0);
      const std::vector<double> xs = cfg.x.empty() ? linspace(0.0, x_max, cfg.grid_n ? cfg.grid_n : 201) : cfg.x;
      for (double x : xs) {
        os << s.y << ',' << x << ',' << value_at(s, x) << ',' << deriv_at(s, x) << ','
           << to_string(s.regime) << '\n';
      }
    }
    emit(cfg, os.str());
  } else {
    std::ostringstream os;
    for (std::size_t i = 0; i < sols.size(); ++i) {
      if (i) os << "\n";
      os << describe_solution(sols[i]);
      for (double x : cfg.x) {
        os << "V(" << fmt(x) << ") = " << fmt(value_at(sols[i], x)) << "   V'(" << fmt(x)
           << ") = " << fmt(deriv_at(sols[i], x)) << "\n";
      }
    }
    emit(cfg, os.str());
  }
  return 0;
}

int cmd_verify(const CliConfig& cfg) {
  const Candidate cand = candidate_from_string(cfg.candidate);
  const std::vector<double> ys = cfg.y.empty() ? reference_thresholds(cfg.params) : cfg.y;
  VerifyOptions opt;
  opt.tol = cfg.tol;
  opt.x_max = cfg.x_max;
  if (cfg.grid_n) opt.grid_n = cfg.grid_n;
  opt.auxiliary = cfg.auxiliary;

  bool all = true;
  json doc = json::array();
  std::ostringstream os;
  os << std::setprecision(10);
  for (double y : ys) {
    const VerifyReport rep = verify(solve(cfg.params, y, cand), opt);
    all = all && rep.pass();
    doc.push_back(to_json(rep));
    os << "y = " << y << "  regime " << to_string(rep.regime) << "  candidate "
       << to_string(rep.candidate) << "  => " << (rep.pass() ? "PASS" : "FAIL") << "\n";
    for (const CheckRecord& c : rep.checks) {
      os << "  " << (c.pass ? "ok  " : "FAIL") << "  " << std::left << std::setw(28) << c.name
         << std::right << " worst " << std::setw(17) << c.worst << " at " << std::setw(17)
         << c.worst_location << "  tol " << c.tolerance << "  n=" << c.grid_size;
      if (!c.detail.empty()) os << "  (" << c.detail << ")";
      os << "\n";
    }
  }
  if (cfg.format == "json") {
    emit(cfg, (doc.size() == 1 ? doc.front() : doc).dump(2) + "\n");
  } else {
    emit(cfg, os.str());
  }
  return all ? 0 : 1;
}

int cmd_sweep(const CliConfig& cfg) {
  const RegimeSeparators sep = separators(cfg.params);
  const std::vector<double> ys = cfg.y.empty() ? reference_thresholds(cfg.params) : cfg.y;
  const double x_max = cfg.x_max > 0 ? cfg.x_max : 4.0;
  const std::size_t n = cfg.grid_n ? cfg.grid_n : 401;
  if (n < 2) throw ValidationError("--grid-n must be at least 2");
  if (cfg.y_points < 1) throw ValidationError("--y-points must be at least 1");
  SweepTable table = sweep(cfg.params, ys, linspace(0.0, x_max, n));

  // Boundary curve over (0, 1.2 y_upper], independent of the value grid.
  const double y_end = 1.2 * sep.y_upper;
  std::vector<double> by;
  for (std::size_t i = 1; i <= cfg.y_points; ++i) by.push_back(y_end * i / cfg.y_points);
  const SweepTable curve = sweep(cfg.params, by, {});

  std::ostringstream values;
  write_sweep_csv(values, table);
  emit(cfg, values.str());

  std::string bpath = cfg.boundaries_out;
  if (bpath.empty() && !cfg.out.empty()) {
    const auto dot = cfg.out.rfind('.');
    bpath = (dot == std::string::npos ? cfg.out : cfg.out.substr(0, dot)) + "_boundaries.csv";
  }
  if (!bpath.empty()) {
    std::ofstream f(bpath);
    if (!f) throw ValidationError("cannot open output file " + bpath);
    write_boundaries_csv(f, curve);
  }
  return 0;
}

json estimate_record(const McEstimate& e, double reference) {
  json j = to_json(e);
  j["reference"] = reference;
  j["z"] = e.std_error > 0 ? (e.mean - reference) / e.std_error : 0.0;
  return j;
}

int cmd_simulate(const CliConfig& cfg) {
  const RegimeSeparators sep = separators(cfg.params);
  const double y = cfg.y.empty() ? 0.9 * sep.y_lower : cfg.y.front();
  if (cfg.y.size() > 1) throw ValidationError("simulate takes a single --y");
  const std::vector<double> xs = cfg.x.empty() ? std::vector<double>{1.0} : cfg.x;
  if (cfg.estimator != "both") estimator_from_string(cfg.estimator);
  if (!(cfg.perturb >= 0.0)) throw ValidationError("--perturb must be >= 0");

  const RegimeSolution sol = solve(cfg.params, y);
  const Strategy opt_strategy = strategy_from_solution(sol);
  PathConfig pc;
  pc.dt = cfg.dt;
  pc.n_paths = cfg.paths;
  pc.seed = cfg.seed;
  pc.threads = cfg.threads;
  pc.validate();

  std::vector<Estimator> ests;
  if (cfg.estimator == "both" || cfg.estimator == "discounting") ests.push_back(Estimator::Discounting);
  if (cfg.estimator == "both" || cfg.estimator == "killing") ests.push_back(Estimator::Killing);

  json doc{{"schema", kSchema},
           {"kind", "simulation"},
           {"params", to_json(cfg.params)},
           {"y", y},
           {"regime", to_string(sol.regime)},
           {"strategy", to_json(opt_strategy)},
           {"dt", pc.dt},
           {"seed", pc.seed}};
  std::ostringstream os;
  os << std::setprecision(10) << "y = " << y << "  regime " << to_string(sol.regime)
     << "  strategy " << to_string(opt_strategy) << "\n";

  json points = json::array();
  for (double x0 : xs) {
    const double v = value_at(sol, x0);
    json point{{"x0", x0}, {"reference", v}};
    json est_list = json::array();
    std::vector<McEstimate> got;
    for (Estimator e : ests) {
      PathConfig c = pc;
      c.estimator = e;
      got.push_back(mc_value(opt_strategy, x0, y, cfg.params, c));
      est_list.push_back(estimate_record(got.back(), v));
      os << "x0 = " << x0 << "  V = " << v << "  " << std::setw(11) << to_string(e) << " "
         << got.back().mean << " +- " << got.back().std_error
         << "  z = " << est_list.back()["z"].get<double>() << "\n";
    }
    point["estimates"] = est_list;
    if (got.size() == 2) {
      const double se = std::hypot(got[0].std_error, got[1].std_error);
      const double z = se > 0 ? (got[1].mean - got[0].mean) / se : 0.0;
      point["estimator_agreement"] = {{"difference", got[1].mean - got[0].mean},
                                      {"joint_std_error", se},
                                      {"z", z}};
      os << "  killing - discounting = " << got[1].mean - got[0].mean << "  z = " << z << "\n";
    }

    if (cfg.perturb > 0.0) {
      std::vector<Perturbation> alts = perturb_boundaries(opt_strategy, cfg.perturb);
      if (opt_strategy.kind == Strategy::Kind::Double) {
        const BarrierScan scan =
            best_single_barrier(cfg.params, y, x0, 1.5 * opt_strategy.top(), 50);
        alts.push_back(Perturbation{"best-single", Strategy::single(scan.barrier)});
      }
      json pert = json::array();
      for (const Perturbation& p : alts) {
        PathConfig c = pc;
        c.estimator = ests.front();
        const McEstimate e = mc_value(p.strategy, x0, y, cfg.params, c);
        const double exact = strategy_value(cfg.params, y, p.strategy).value(x0);
        json rec = estimate_record(e, v);
        rec["label"] = p.label;
        rec["strategy"] = to_json(p.strategy);
        rec["exact"] = exact;
        rec["within_reference"] = e.mean <= v + 3.0 * e.std_error;
        pert.push_back(rec);
        os << "  " << std::left << std::setw(12) << p.label << std::right << " J = " << exact
           << "  mc " << e.mean << " +- " << e.std_error << "  "
           << (rec["within_reference"].get<bool>() ? "<= V + 3se" : "ABOVE V + 3se") << "\n";
      }
      point["perturbations"] = pert;
    }
    points.push_back(point);
  }
  doc["points"] = points;

  if (cfg.trace > 0) {
    std::ofstream f(cfg.trace_out);
    if (!f) throw ValidationError("cannot open trace file " + cfg.trace_out);
    PathConfig c = pc;
    c.estimator = ests.front();
    for (std::size_t i = 0; i < cfg.trace; ++i) {
      std::vector<TracePoint> tr;
      simulate_path(opt_strategy, xs.front(), y, cfg.params, c, i, &tr);
      write_trace_csv(f, tr, i, i == 0);
    }
  }

  if (cfg.format == "json" || !cfg.out.empty()) {
    emit(cfg, doc.dump(2) + "\n");
  }
  if (cfg.format != "json") std::cout << os.str();
  return 0;
}

void add_model_flags(CLI::App& app, CliConfig& cfg) {
  app.add_option("--mu", cfg.params.mu, "drift")->capture_default_str();
  app.add_option("--sigma", cfg.params.sigma, "volatility")->capture_default_str();
  app.add_option("--r", cfg.params.r, "base discount rate")->capture_default_str();
  app.add_option("--q", cfg.params.q, "omega-clock rate")->capture_default_str();
  app.add_option("--out", cfg.out, "output file (stdout if omitted)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal dividends with occupation-time (omega-clock) default"};
  app.set_config("--config", "", "TOML/INI file with flag defaults");
  app.require_subcommand(1);
  CliConfig cfg;

  auto* solve_cmd = app.add_subcommand("solve", "closed-form value function and free boundaries");
  auto* verify_cmd = app.add_subcommand("verify", "numerical HJB certificate");
  auto* sweep_cmd = app.add_subcommand("sweep", "value tables and boundary curve as CSV");
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo estimate of the optimal strategy");
  for (auto* sub : {solve_cmd, verify_cmd, sweep_cmd, sim_cmd}) {
    add_model_flags(*sub, cfg);
    sub->add_option("--y", cfg.y, "distress threshold(s)");
  }
  const std::vector<std::string> candidates{"auto", "classical-r", "classical-rq",
                                            "classical-penalized", "subcritical"};
  for (auto* sub : {solve_cmd, verify_cmd}) {
    sub->add_option("--candidate", cfg.candidate, "value function to build")
        ->check(CLI::IsMember(candidates))
        ->capture_default_str();
    sub->add_option("--x-max", cfg.x_max, "right end of the x grid (0 = automatic)");
    sub->add_option("--grid-n", cfg.grid_n, "points in the x grid");
  }
  solve_cmd->add_option("--x", cfg.x, "evaluate V and V' at these points");
  solve_cmd->add_option("--format", cfg.format, "text, json or csv")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();

  verify_cmd->add_option("--tol", cfg.tol, "residual tolerance")->capture_default_str();
  verify_cmd->add_flag("!--no-auxiliary", cfg.auxiliary, "skip the auxiliary-function checks");
  verify_cmd->add_option("--format", cfg.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  sweep_cmd->add_option("--x-max", cfg.x_max, "right end of the x grid (default 4)");
  sweep_cmd->add_option("--grid-n", cfg.grid_n, "points in the x grid (default 401)");
  sweep_cmd->add_option("--y-points", cfg.y_points, "points on the boundary curve")
      ->capture_default_str();
  sweep_cmd->add_option("--boundaries-out", cfg.boundaries_out,
                        "boundary curve CSV (default: <out>_boundaries.csv)");
  sweep_cmd->add_option("--format", cfg.format, "csv")->check(CLI::IsMember({"text", "csv"}));

  sim_cmd->add_option("--x", cfg.x, "initial surplus values (default 1)");
  sim_cmd->add_option("--dt", cfg.dt, "Euler step")->capture_default_str();
  sim_cmd->add_option("--paths", cfg.paths, "number of paths")->capture_default_str();
  sim_cmd->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  sim_cmd->add_option("--estimator", cfg.estimator, "killing, discounting or both")
      ->check(CLI::IsMember({"killing", "discounting", "both"}))
      ->capture_default_str();
  sim_cmd->add_option("--perturb", cfg.perturb, "also simulate boundaries moved by +-this");
  sim_cmd->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  sim_cmd->add_option("--trace", cfg.trace, "dump the first K paths");
  sim_cmd->add_option("--trace-out", cfg.trace_out, "trace CSV file")->capture_default_str();
  sim_cmd->add_option("--format", cfg.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    cfg.params.validate();
    if (solve_cmd->parsed()) return cmd_solve(cfg);
    if (verify_cmd->parsed()) return cmd_verify(cfg);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg);
    return cmd_simulate(cfg);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConsistencyError& e) {
    std::cerr << "inconsistency: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
