#include <gtest/gtest.h>

#include <sstream>

#include "omegadiv/errors.hpp"
#include "omegadiv/serialize.hpp"

using namespace omegadiv;

namespace {
const ModelParams kDefault{0.1, 0.1, 0.02, 0.1};
}

TEST(SolutionJson, RoundTripIsExact) {
  for (double y : {0.0, 1.5, 2.0144, 5.0}) {
    const RegimeSolution sol = solve(kDefault, y);
    const std::string text = to_json(sol).dump();
    const RegimeSolution back = solution_from_json(nlohmann::json::parse(text));
    EXPECT_EQ(back.regime, sol.regime);
    EXPECT_EQ(back.y, sol.y);
    EXPECT_EQ(back.action.size(), sol.action.size());
    EXPECT_EQ(back.separators.y_lower, sol.separators.y_lower);
    EXPECT_EQ(back.pieces.breakpoints(), sol.pieces.breakpoints());
    for (double x = 0.0; x < 6.0; x += 0.05) {
      EXPECT_EQ(value_at(back, x), value_at(sol, x)) << "x=" << x;
      EXPECT_EQ(deriv_at(back, x), deriv_at(sol, x)) << "x=" << x;
    }
    EXPECT_EQ(back.critical.has_value(), sol.critical.has_value());
    EXPECT_EQ(back.subcritical.has_value(), sol.subcritical.has_value());
  }
}

TEST(SolutionJson, Schema) {
  const nlohmann::json j = to_json(solve(kDefault, 2.0144));
  EXPECT_EQ(j.at("schema"), kSchema);
  EXPECT_EQ(j.at("regime"), "critical");
  EXPECT_TRUE(j.at("action").back().at("hi").is_null());
  for (const auto& seg : j.at("segments")) {
    const std::string kind = seg.at("kind");
    EXPECT_TRUE(kind == "exp" || kind == "affine");
    if (kind == "exp") EXPECT_TRUE(seg.at("rate_tag") == "r" || seg.at("rate_tag") == "r+q");
  }
}

TEST(SolutionJson, RejectsMalformedDocuments) {
  nlohmann::json j = to_json(solve(kDefault, 1.0));
  j["schema"] = "something-else";
  EXPECT_THROW(solution_from_json(j), ValidationError);
  j = to_json(solve(kDefault, 1.0));
  j.erase("segments");
  EXPECT_THROW(solution_from_json(j), ValidationError);
  j = to_json(solve(kDefault, 1.0));
  j["params"]["mu"] = -1.0;
  EXPECT_THROW(solution_from_json(j), ValidationError);
}

TEST(Csv, SweepAndBoundaryHeaders) {
  const SweepTable t = sweep(kDefault, {1.0, 2.0}, {0.0, 1.0});
  std::ostringstream a, b;
  write_sweep_csv(a, t);
  write_boundaries_csv(b, t);
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "y,x,V,dV,regime");
  EXPECT_EQ(b.str().substr(0, b.str().find('\n')), "y,regime,barrier,b_low_fixed,b_low_free,b_up_free");
  std::istringstream lines(a.str());
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) ++n;
  EXPECT_EQ(n, 5);
  // Subcritical row leaves the critical columns blank.
  EXPECT_NE(b.str().find("1,subcritical,"), std::string::npos);
  EXPECT_NE(b.str().find(",,,"), std::string::npos);
}

TEST(Json, EstimateAndReport) {
  McEstimate e;
  e.mean = 1.5;
  e.std_error = 0.01;
  const nlohmann::json j = to_json(e);
  EXPECT_EQ(j.at("estimator"), "discounting");
  EXPECT_EQ(j.at("mean"), 1.5);
  VerifyOptions opt;
  opt.auxiliary = false;
  const nlohmann::json r = to_json(verify(solve(kDefault, 1.0), opt));
  EXPECT_EQ(r.at("pass"), true);
  EXPECT_FALSE(r.at("checks").empty());
}
