#pragma once

#include <string>

#include <json.hpp>

#include "dilated/cltsys.hpp"
#include "dilated/measure.hpp"
#include "dilated/psd.hpp"

namespace dilated {

using json = nlohmann::ordered_json;

json to_json(const PsdMatrix& m);
PsdMatrix psd_from_json(const json& j);

json to_json(const Measure& mu);
Measure measure_from_json(const json& j);

json to_json(const ConvergenceReport& r);

/// CSV table with a `#schema=1` header comment and columns
/// iteration,d_to_target,d_successive,ratio,grading_drift.
std::string report_to_csv(const ConvergenceReport& r);

}  // namespace dilated
