#include "omegadiv/serialize.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "omegadiv/errors.hpp"

namespace omegadiv {

using nlohmann::json;

namespace {

std::string rate_name(RateTag t) { return t == RateTag::Penalized ? "r+q" : "r"; }

RateTag rate_from_name(const std::string& s) {
  if (s == "r+q") return RateTag::Penalized;
  if (s == "r") return RateTag::Base;
  throw ValidationError("unknown rate tag: " + s);
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_inf(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

template <class T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("missing field: ") + key);
  return j.at(key).get<T>();
}

void put_csv_number(std::ostream& os, double v) {
  if (std::isfinite(v)) os << v;
}

RegimeSolution solution_from_json_unchecked(const json& j);

}  // namespace

json to_json(const ModelParams& p) {
  return json{{"mu", p.mu}, {"sigma", p.sigma}, {"r", p.r}, {"q", p.q}};
}

ModelParams params_from_json(const json& j) {
  ModelParams p;
  p.mu = required<double>(j, "mu");
  p.sigma = required<double>(j, "sigma");
  p.r = required<double>(j, "r");
  p.q = required<double>(j, "q");
  p.validate();
  return p;
}

json to_json(const RegimeSolution& sol) {
  json j;
  j["schema"] = kSchema;
  j["params"] = to_json(sol.params);
  j["y"] = sol.y;
  j["regime"] = to_string(sol.regime);
  j["candidate"] = to_string(sol.candidate);
  const RegimeSeparators& s = sol.separators;
  j["separators"] = {{"y_lower", s.y_lower},
                     {"y_upper", s.y_upper},
                     {"b_classical_penalized", s.b_classical_penalized},
                     {"b_classical_base", s.b_classical_base}};
  j["breakpoints"] = sol.pieces.breakpoints();
  json segs = json::array();
  for (const Segment& seg : sol.pieces.segments()) {
    json e{{"kind", seg.kind == SegmentKind::Exp ? "exp" : "affine"},
           {"anchor", seg.anchor},
           {"coeff1", seg.coeff1},
           {"coeff2", seg.coeff2}};
    if (seg.kind == SegmentKind::Exp) e["rate_tag"] = rate_name(seg.rate);
    segs.push_back(e);
  }
  j["segments"] = segs;
  json action = json::array();
  for (const Interval& iv : sol.action) action.push_back({{"lo", iv.lo}, {"hi", number_or_null(iv.hi)}});
  j["action"] = action;
  if (sol.classical) {
    const ClassicalSolution& c = *sol.classical;
    j["classical"] = {{"rho", c.rho}, {"barrier", c.barrier}, {"normalizer", c.normalizer},
                      {"gamma1", c.exponents.gamma1}, {"gamma2", c.exponents.gamma2}};
  }
  if (sol.subcritical) {
    const SubcriticalSolution& c = *sol.subcritical;
    j["subcritical"] = {{"y", c.y},   {"barrier", c.barrier}, {"gap", c.gap}, {"k1", c.k1},
                        {"k2", c.k2}, {"k3", c.k3},           {"k4", c.k4}};
  }
  if (sol.critical) {
    const CriticalSolution& c = *sol.critical;
    j["critical"] = {{"y", c.y},
                     {"b_low_fixed", c.b_low_fixed},
                     {"b_low_free", c.b_low_free},
                     {"b_up_free", c.b_up_free},
                     {"ee1", c.ee1},
                     {"ee2", c.ee2},
                     {"ee3", c.ee3},
                     {"ee4", c.ee4}};
  }
  return j;
}

RegimeSolution solution_from_json(const json& j) {
  try {
    return solution_from_json_unchecked(j);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed solution document: ") + e.what());
  }
}

namespace {

RegimeSolution solution_from_json_unchecked(const json& j) {
  if (required<std::string>(j, "schema") != kSchema) {
    throw ValidationError("unsupported schema: " + j.at("schema").get<std::string>());
  }
  RegimeSolution sol;
  sol.params = params_from_json(j.at("params"));
  sol.y = required<double>(j, "y");
  sol.regime = regime_from_string(required<std::string>(j, "regime"));
  sol.candidate = candidate_from_string(required<std::string>(j, "candidate"));
  const json& s = j.at("separators");
  sol.separators.y_lower = required<double>(s, "y_lower");
  sol.separators.y_upper = required<double>(s, "y_upper");
  sol.separators.b_classical_penalized = required<double>(s, "b_classical_penalized");
  sol.separators.b_classical_base = required<double>(s, "b_classical_base");

  const Exponents pen = exponents(sol.params, sol.params.penalized_rate());
  const Exponents base = exponents(sol.params, sol.params.r);
  std::vector<Segment> segs;
  for (const json& e : j.at("segments")) {
    const std::string kind = required<std::string>(e, "kind");
    const double anchor = required<double>(e, "anchor");
    const double c1 = required<double>(e, "coeff1");
    const double c2 = required<double>(e, "coeff2");
    if (kind == "affine") {
      segs.push_back(affine_segment(anchor, c1, c2));
    } else if (kind == "exp") {
      const RateTag tag = rate_from_name(required<std::string>(e, "rate_tag"));
      segs.push_back(exp_segment(tag == RateTag::Penalized ? pen : base, tag, anchor, c1, c2));
    } else {
      throw ValidationError("unknown segment kind: " + kind);
    }
  }
  sol.pieces = PiecewiseValue(j.at("breakpoints").get<std::vector<double>>(), std::move(segs));
  for (const json& iv : j.at("action")) {
    sol.action.push_back(Interval{required<double>(iv, "lo"), number_or_inf(iv.at("hi"))});
  }
  if (j.contains("classical")) {
    const json& c = j.at("classical");
    ClassicalSolution cs;
    cs.rho = required<double>(c, "rho");
    cs.barrier = required<double>(c, "barrier");
    cs.normalizer = required<double>(c, "normalizer");
    cs.exponents = Exponents{required<double>(c, "gamma1"), required<double>(c, "gamma2"), cs.rho};
    sol.classical = cs;
  }
  if (j.contains("subcritical")) {
    const json& c = j.at("subcritical");
    sol.subcritical = SubcriticalSolution{required<double>(c, "y"),  required<double>(c, "barrier"),
                                          required<double>(c, "gap"), required<double>(c, "k1"),
                                          required<double>(c, "k2"), required<double>(c, "k3"),
                                          required<double>(c, "k4")};
  }
  if (j.contains("critical")) {
    const json& c = j.at("critical");
    sol.critical = CriticalSolution{
        required<double>(c, "y"),          required<double>(c, "b_low_fixed"),
        required<double>(c, "b_low_free"), required<double>(c, "b_up_free"),
        required<double>(c, "ee1"),        required<double>(c, "ee2"),
        required<double>(c, "ee3"),        required<double>(c, "ee4")};
  }
  return sol;
}

}  // namespace

json to_json(const VerifyReport& report) {
  json checks = json::array();
  for (const CheckRecord& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"grid_size", c.grid_size},
                      {"worst", number_or_null(c.worst)},
                      {"worst_location", c.worst_location},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass},
                      {"detail", c.detail}});
  }
  return json{{"schema", kSchema},
              {"kind", "verify_report"},
              {"params", to_json(report.params)},
              {"y", report.y},
              {"regime", to_string(report.regime)},
              {"candidate", to_string(report.candidate)},
              {"pass", report.pass()},
              {"checks", checks}};
}

json to_json(const McEstimate& e) {
  return json{{"estimator", to_string(e.estimator)},
              {"mean", e.mean},
              {"std_error", e.std_error},
              {"n_paths", e.n_paths},
              {"n_ruined", e.n_ruined},
              {"n_killed", e.n_killed},
              {"n_truncated", e.n_truncated},
              {"mean_clock_at_end", e.mean_clock_at_end},
              {"n_steps", e.n_steps},
              {"seconds", e.seconds}};
}

json to_json(const Strategy& s) {
  if (s.kind == Strategy::Kind::Single) return json{{"kind", "single"}, {"b", s.b}};
  return json{{"kind", "double"}, {"b1", s.b1}, {"c1", s.c1}, {"b2", s.b2}};
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  const auto old = os.precision(17);
  os << "y,x,V,dV,regime\n";
  for (const SweepRow& r : table.rows) {
    os << r.y << ',' << r.x << ',' << r.value << ',' << r.deriv << ',' << to_string(r.regime)
       << '\n';
  }
  os.precision(old);
}

void write_boundaries_csv(std::ostream& os, const SweepTable& table) {
  const auto old = os.precision(17);
  os << "y,regime,barrier,b_low_fixed,b_low_free,b_up_free\n";
  for (const BoundaryRow& b : table.boundaries) {
    os << b.y << ',' << to_string(b.regime) << ',';
    put_csv_number(os, b.barrier);
    os << ',';
    put_csv_number(os, b.b_low_fixed);
    os << ',';
    put_csv_number(os, b.b_low_free);
    os << ',';
    put_csv_number(os, b.b_up_free);
    os << '\n';
  }
  os.precision(old);
}

void write_trace_csv(std::ostream& os, const std::vector<TracePoint>& trace, std::size_t path,
                     bool header) {
  const auto old = os.precision(17);
  if (header) os << "path,t,X,D_cum,clock\n";
  for (const TracePoint& p : trace) {
    os << path << ',' << p.t << ',' << p.x << ',' << p.dividends << ',' << p.clock << '\n';
  }
  os.precision(old);
}

}  // namespace omegadiv
