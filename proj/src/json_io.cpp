#include "photocount/json_io.hpp"

namespace photocount {

namespace {

double require_number(const nlohmann::json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_number())
    throw UsageError(std::string("signal model: missing or non-numeric "
                                 "field '") +
                     field + "'");
  return j[field].get<double>();
}

} // namespace

nlohmann::json to_json(const SignalModel& m) {
  if (const auto* c = m.get_if<ConstantSignal>())
    return {{"kind", "constant"}, {"intensity", c->intensity}};
  if (const auto* p = m.get_if<PiecewiseSignal>())
    return {{"kind", "piecewise"},
            {"breakpoints", p->breakpoints},
            {"levels", p->levels}};
  const auto& pair = *m.get_if<ModulatedPairSignal>();
  return {{"kind", "modulated_pair"},
          {"mean", pair.mean},
          {"relaxation_time", pair.relaxation_time},
          {"amplitude", pair.amplitude},
          {"cross_correlation", pair.cross_correlation}};
}

SignalModel signal_model_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw UsageError("signal model: need an object with a 'kind' string");
  const auto kind = j["kind"].get<std::string>();
  if (kind == "constant")
    return SignalModel::constant(require_number(j, "intensity"));
  if (kind == "piecewise") {
    if (!j.contains("breakpoints") || !j["breakpoints"].is_array() ||
        !j.contains("levels") || !j["levels"].is_array())
      throw UsageError("signal model: piecewise needs 'breakpoints' and "
                       "'levels' arrays");
    return SignalModel::piecewise(j["breakpoints"].get<std::vector<double>>(),
                                  j["levels"].get<std::vector<double>>());
  }
  if (kind == "modulated_pair")
    return SignalModel::modulated_pair(require_number(j, "mean"),
                                       require_number(j, "relaxation_time"),
                                       require_number(j, "amplitude"),
                                       require_number(j, "cross_correlation"));
  throw UsageError("signal model: unknown kind '" + kind + "'");
}

nlohmann::json to_json(const EventTrain& train) {
  return {{"horizon", train.horizon()}, {"timestamps", train.timestamps()}};
}

EventTrain event_train_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("horizon") || !j.contains("timestamps"))
    throw UsageError("event train: need 'horizon' and 'timestamps'");
  return EventTrain(j["timestamps"].get<std::vector<double>>(),
                    j["horizon"].get<double>());
}

nlohmann::json to_json(const RateEstimate& est) {
  nlohmann::json j{{"estimate", est.rate},
                   {"std_error", est.std_error},
                   {"n", est.n_events}};
  if (est.low_count)
    j["low_count"] = true;
  return j;
}

} // namespace photocount
