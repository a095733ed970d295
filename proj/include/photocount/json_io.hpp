#pragma once
#include <json.hpp>

#include "photocount/core_model.hpp"
#include "photocount/montecarlo.hpp"
#include "photocount/stats.hpp"

namespace photocount {

// Wire schema for signal models:
//   {"kind": "constant",       "intensity": x}
//   {"kind": "piecewise",      "breakpoints": [...], "levels": [...]}
//   {"kind": "modulated_pair", "mean": m, "relaxation_time": tau,
//                              "amplitude": a, "cross_correlation": rho}
nlohmann::json to_json(const SignalModel& m);
SignalModel signal_model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EventTrain& train);
EventTrain event_train_from_json(const nlohmann::json& j);

/// One-line estimator record: {"estimate": r, "std_error": se, "n": k}, plus
/// "low_count": true when flagged.
nlohmann::json to_json(const RateEstimate& est);

} // namespace photocount
