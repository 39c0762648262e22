#include "cloudoracle/json_codec.hpp"

#include "cloudoracle/errors.hpp"

namespace cloudoracle::codec {

namespace {

json pair_ids(const PlacementPair& pair) { return json::array({pair.ids[0], pair.ids[1]}); }

}  // namespace

json to_json(const BuildConfig& cfg) {
  return {{"min_dist_km", cfg.min_dist_km},
          {"prune", cfg.prune},
          {"parallel_chunks", cfg.parallel_chunks}};
}

json to_json(const BuildReport& report) {
  return {{"candidates_enumerated", report.candidates_enumerated},
          {"pruned", report.pruned},
          {"retained", report.retained},
          {"enumerate_seconds", report.enumerate_seconds},
          {"prune_seconds", report.prune_seconds},
          {"matrix_seconds", report.matrix_seconds}};
}

BuildConfig build_config_from_json(const json& j) {
  BuildConfig cfg;
  try {
    if (j.contains("min_dist_km")) cfg.min_dist_km = j.at("min_dist_km").get<double>();
    if (j.contains("prune")) cfg.prune = j.at("prune").get<bool>();
    if (j.contains("parallel_chunks"))
      cfg.parallel_chunks = j.at("parallel_chunks").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid build config: ") + e.what());
  }
  if (cfg.parallel_chunks == 0) throw InputError("parallel_chunks must be positive");
  return cfg;
}

BuildReport build_report_from_json(const json& j) {
  BuildReport r;
  try {
    r.candidates_enumerated = j.at("candidates_enumerated").get<std::size_t>();
    r.pruned = j.at("pruned").get<std::size_t>();
    r.retained = j.at("retained").get<std::size_t>();
    r.enumerate_seconds = j.at("enumerate_seconds").get<double>();
    r.prune_seconds = j.at("prune_seconds").get<double>();
    r.matrix_seconds = j.at("matrix_seconds").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid build report: ") + e.what());
  }
  return r;
}

json min_result(const Oracle& oracle, const MinResult& result) {
  return {{"schema", kSchema},
          {"pair", pair_ids(oracle.pair(result.placement_index))},
          {"cost", result.cost},
          {"placement_index", result.placement_index}};
}

json drift_result(const Oracle& oracle, const DriftResult& result) {
  json j = {{"schema", kSchema},
            {"current_index", result.current_index},
            {"current_pair", pair_ids(oracle.pair(result.current_index))},
            {"current_cost", result.current_cost},
            {"unbounded", result.unbounded()}};
  if (result.unbounded()) {
    j["next_index"] = nullptr;
    j["pair"] = nullptr;
    j["param_next"] = nullptr;
    j["cost_next"] = nullptr;
    j["distance"] = nullptr;
  } else {
    j["next_index"] = *result.next_index;
    j["pair"] = pair_ids(oracle.pair(*result.next_index));
    j["param_next"] = result.param_next;
    j["cost_next"] = result.cost_next;
    j["distance"] = result.distance;
  }
  return j;
}

json scenario_summary(const ScenarioSummary& s) {
  return {{"schema", kSchema},
          {"mean", s.mean_improvement},
          {"median", s.median_improvement},
          {"ci95", json::array({s.ci95_low, s.ci95_high})},
          {"samples_used", s.samples_used},
          {"samples_rejected", s.samples_rejected}};
}

json oracle_summary(const std::string& id, const Oracle& oracle) {
  json j = {{"schema", kSchema},
            {"oracle_id", id},
            {"clients", oracle.clients()},
            {"num_clients", oracle.num_clients()},
            {"dims", oracle.dims()},
            {"placement_count", oracle.size()}};
  if (oracle.build_info()) {
    j["build_config"] = to_json(oracle.build_info()->config);
    j["build_report"] = to_json(oracle.build_info()->report);
  }
  return j;
}

std::vector<double> number_array(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw InputError(std::string(what) + " must contain only numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Workload workload_from_json(const json& j) {
  if (!j.is_object() || !j.contains("w") || !j.contains("r"))
    throw InputError("workload must be an object with \"w\" and \"r\" arrays");
  return Workload::make(number_array(j.at("w"), "w"), number_array(j.at("r"), "r"));
}

std::string dump(const json& j) { return j.dump(); }

}  // namespace cloudoracle::codec
