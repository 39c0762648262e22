#pragma once

// JSON views of results shared by the CLI, the HTTP service and the oracle
// file metadata. Every document the CLI or service emits carries "schema":"v1".

#include "json.hpp"

#include "cloudoracle/model.hpp"
#include "cloudoracle/query.hpp"
#include "cloudoracle/simulation.hpp"

namespace cloudoracle::codec {

using nlohmann::json;

inline constexpr const char* kSchema = "v1";

json to_json(const BuildConfig& cfg);
json to_json(const BuildReport& report);
BuildConfig build_config_from_json(const json& j);
BuildReport build_report_from_json(const json& j);

json min_result(const Oracle& oracle, const MinResult& result);
json drift_result(const Oracle& oracle, const DriftResult& result);
json scenario_summary(const ScenarioSummary& summary);
json oracle_summary(const std::string& id, const Oracle& oracle);

/// {"w": [...], "r": [...]} -> validated Workload. Throws InputError.
Workload workload_from_json(const json& j);
std::vector<double> number_array(const json& j, const char* what);

/// Compact dump; doubles use the shortest representation that round-trips.
std::string dump(const json& j);

}  // namespace cloudoracle::codec
