#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "omegadiv/simulate.hpp"
#include "omegadiv/value.hpp"
#include "omegadiv/verify.hpp"

namespace omegadiv {

inline constexpr const char* kSchema = "omega-dividend/v1";

nlohmann::json to_json(const ModelParams& params);
ModelParams params_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RegimeSolution& sol);
/// Inverse of to_json; rebuilds the segments from the stored coefficients.
RegimeSolution solution_from_json(const nlohmann::json& j);

nlohmann::json to_json(const VerifyReport& report);
nlohmann::json to_json(const McEstimate& est);
nlohmann::json to_json(const Strategy& strategy);

/// Columns y,x,V,dV,regime.
void write_sweep_csv(std::ostream& os, const SweepTable& table);
/// Columns y,regime,barrier,b_low_fixed,b_low_free,b_up_free; blank where absent.
void write_boundaries_csv(std::ostream& os, const SweepTable& table);
/// Columns t,X,D_cum,clock.
void write_trace_csv(std::ostream& os, const std::vector<TracePoint>& trace, std::size_t path = 0,
                     bool header = true);

}  // namespace omegadiv
