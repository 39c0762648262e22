#include "cloudoracle/service.hpp"

#include <mutex>
#include <regex>

#include "httplib.h"

#include "cloudoracle/builder.hpp"
#include "cloudoracle/errors.hpp"
#include "cloudoracle/json_codec.hpp"
#include "cloudoracle/query.hpp"
#include "cloudoracle/simulation.hpp"
#include "cloudoracle/storage.hpp"

namespace cloudoracle {

namespace {

using nlohmann::json;

ApiResponse ok(const json& j) { return {200, j.dump()}; }

ApiResponse error(int status, const std::string& kind, const std::string& detail) {
  return {status, json({{"error", kind}, {"detail", detail}}).dump()};
}

ApiResponse not_found(const std::string& id) { return error(404, "not_found", "unknown oracle '" + id + "'"); }

json parse_body(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("request body is not valid JSON: ") + e.what());
  }
}

// Maps library exceptions onto status codes.
template <typename Fn>
ApiResponse guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const DimensionMismatch& e) {
    return error(422, "dimension_mismatch", e.what());
  } catch (const InputError& e) {
    return error(400, "invalid_request", e.what());
  } catch (const json::exception& e) {  // wrong field types in the request
    return error(400, "invalid_request", e.what());
  } catch (const std::exception& e) {
    return error(500, "internal", e.what());
  }
}

std::optional<SampleDistribution> distribution_named(const std::string& name) {
  if (name == "uniform") return SampleDistribution::Uniform;
  if (name == "log-uniform" || name == "loguniform") return SampleDistribution::LogUniform;
  return std::nullopt;
}

bool valid_id(const std::string& id) {
  static const std::regex pattern("[A-Za-z0-9_.-]{1,128}");
  return std::regex_match(id, pattern);
}

}  // namespace

bool OracleRegistry::add(const std::string& id, std::shared_ptr<const Oracle> oracle) {
  std::unique_lock lock(mutex_);
  return oracles_.emplace(id, std::move(oracle)).second;
}

std::shared_ptr<const Oracle> OracleRegistry::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = oracles_.find(id);
  return it == oracles_.end() ? nullptr : it->second;
}

std::vector<std::string> OracleRegistry::ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : oracles_) out.push_back(id);
  return out;
}

bool OracleRegistry::add_trace(const std::string& id, std::string csv_text) {
  std::unique_lock lock(mutex_);
  return traces_.emplace(id, std::move(csv_text)).second;
}

std::optional<std::string> OracleRegistry::trace(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = traces_.find(id);
  if (it == traces_.end()) return std::nullopt;
  return it->second;
}

std::size_t OracleRegistry::load_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw InputError("oracle directory '" + dir.string() + "' does not exist");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::size_t loaded = 0;
  for (const auto& f : files) {
    const auto id = f.stem().string();
    if (f.extension() == ".oracle") {
      if (!add(id, std::make_shared<const Oracle>(load_oracle(f))))
        throw InputError("duplicate oracle id '" + id + "'");
      ++loaded;
    } else if (f.extension() == ".csv") {
      add_trace(id, read_file(f));
    }
  }
  return loaded;
}

Service::Service(ServiceConfig config) : config_(config) {}

ApiResponse Service::list_oracles() const {
  auto items = json::array();
  for (const auto& id : registry_.ids()) {
    if (auto o = registry_.find(id))
      items.push_back({{"oracle_id", id}, {"dims", o->dims()}, {"placement_count", o->size()}});
  }
  return ok({{"schema", codec::kSchema}, {"oracles", std::move(items)}});
}

ApiResponse Service::get_oracle(const std::string& id) const {
  auto oracle = registry_.find(id);
  if (!oracle) return not_found(id);
  return ok(codec::oracle_summary(id, *oracle));
}

ApiResponse Service::query(const std::string& id, const std::string& body) const {
  auto oracle = registry_.find(id);
  if (!oracle) return not_found(id);
  return guarded([&] {
    const auto workload = codec::workload_from_json(parse_body(body));
    return ok(codec::min_result(*oracle, query_minimum(*oracle, workload)));
  });
}

ApiResponse Service::drift(const std::string& id, const std::string& body) const {
  auto oracle = registry_.find(id);
  if (!oracle) return not_found(id);
  return guarded([&] {
    const auto req = parse_body(body);
    const auto workload = codec::workload_from_json(req);
    DriftMode mode = DriftMode::Lifted;
    if (req.contains("mode") && !req.at("mode").is_null()) {
      const auto m = req.at("mode").is_string() ? req.at("mode").get<std::string>() : "";
      if (m == "projected")
        mode = DriftMode::Projected;
      else if (m != "lifted")
        throw InputError("mode must be \"lifted\" or \"projected\"");
    }
    DriftResult result;
    if (req.contains("direction") && !req.at("direction").is_null()) {
      auto dir = DriftVector::make(codec::number_array(req.at("direction"), "direction"));
      result = query_drift_directed(*oracle, workload, dir, mode);
    } else {
      result = query_drift_undirected(*oracle, workload);
    }
    return ok(codec::drift_result(*oracle, result));
  });
}

ApiResponse Service::whatif(const std::string& body) const {
  json req;
  try {
    req = parse_body(body);
  } catch (const InputError& e) {
    return error(400, "invalid_request", e.what());
  }
  if (!req.is_object() || !req.contains("oracle_a") || !req.contains("oracle_b") ||
      !req.at("oracle_a").is_string() || !req.at("oracle_b").is_string())
    return error(400, "invalid_request", "oracle_a and oracle_b ids are required");
  const auto id_a = req.at("oracle_a").get<std::string>();
  const auto id_b = req.at("oracle_b").get<std::string>();
  auto a = registry_.find(id_a);
  if (!a) return not_found(id_a);
  auto b = registry_.find(id_b);
  if (!b) return not_found(id_b);

  return guarded([&] {
    if (a->clients() != b->clients())
      throw DimensionMismatch("oracle_a and oracle_b have different client orderings");
    SampleSpec spec;
    json echo = {{"oracle_a", id_a}, {"oracle_b", id_b}};
    if (req.contains("trace_id")) {
      const auto trace_id = req.at("trace_id").get<std::string>();
      auto text = registry_.trace(trace_id);
      if (!text) return error(404, "not_found", "unknown trace '" + trace_id + "'");
      TraceSource trace{parse_trace(*text, a->num_clients())};
      spec.count = req.contains("samples") ? req.at("samples").get<std::size_t>()
                                           : trace.rows.size();
      spec.source = std::move(trace);
      echo["trace_id"] = trace_id;
    } else {
      if (!req.contains("samples") || !req.contains("seed"))
        throw InputError("synthetic what-if needs \"samples\" and \"seed\"");
      SyntheticSource syn;
      syn.seed = req.at("seed").get<std::uint64_t>();
      if (req.contains("dist")) {
        const auto& d = req.at("dist");
        auto dist = distribution_named(d.value("kind", std::string("uniform")));
        if (!dist) throw InputError("dist.kind must be uniform or log-uniform");
        syn.distribution = *dist;
        syn.low = d.value("low", 0.0);
        syn.high = d.value("high", 1.0);
      }
      spec.count = req.at("samples").get<std::size_t>();
      spec.source = syn;
      echo["seed"] = syn.seed;
    }
    if (spec.count > config_.max_whatif_samples)
      return error(413, "too_large", "sample count exceeds " +
                                         std::to_string(config_.max_whatif_samples));
    const auto samples = generate_samples(spec, a->num_params(), config_.worker_chunks);
    auto out = codec::scenario_summary(simulate_scenario(*a, *b, samples, config_.worker_chunks));
    out.update(echo);
    return ok(out);
  });
}

ApiResponse Service::build(const std::string& datacenters_json, const std::string& latency_csv,
                           const std::string& config_json) {
  return guarded([&] {
    json cfg_doc = json::object();
    if (!config_json.empty()) cfg_doc = parse_body(config_json);
    if (!cfg_doc.is_object()) throw InputError("config must be a JSON object");
    const auto cfg = codec::build_config_from_json(cfg_doc);

    const auto catalog = parse_datacenters(datacenters_json);
    const auto storages = ids_with_role(catalog, Role::Storage).size();
    if (storages > config_.max_build_storages)
      return error(413, "too_large", std::to_string(storages) + " storage data centers exceed the cap of " +
                                         std::to_string(config_.max_build_storages));
    const auto latency = parse_latency_csv(latency_csv, catalog);
    auto [oracle, report] = build_oracle(catalog, latency, cfg);

    std::string id;
    if (cfg_doc.contains("id")) {
      id = cfg_doc.at("id").get<std::string>();
      if (!valid_id(id)) throw InputError("oracle id must match [A-Za-z0-9_.-]{1,128}");
      if (!registry_.add(id, std::make_shared<const Oracle>(std::move(oracle))))
        throw InputError("oracle id '" + id + "' already exists");
    } else {
      auto shared = std::make_shared<const Oracle>(std::move(oracle));
      for (std::size_t k = registry_.ids().size() + 1;; ++k) {
        id = "oracle-" + std::to_string(k);
        if (registry_.add(id, shared)) break;
      }
    }
    return ok({{"schema", codec::kSchema},
               {"oracle_id", id},
               {"build_report", codec::to_json(report)}});
  });
}

void Service::mount(httplib::Server& server) {
  auto send = [](httplib::Response& res, const ApiResponse& api) {
    res.status = api.status;
    res.set_content(api.body, "application/json");
  };
  auto json_body = [](const httplib::Request& req) {
    const auto type = req.get_header_value("Content-Type");
    return type.rfind("application/json", 0) == 0;
  };
  auto bad_type = error(400, "invalid_request", "POST bodies must be application/json");

  server.Get("/v1/oracles", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, list_oracles());
  });
  server.Get(R"(/v1/oracles/([^/]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, get_oracle(req.matches[1]));
  });
  server.Post(R"(/v1/oracles/([^/]+)/query)",
              [=, this](const httplib::Request& req, httplib::Response& res) {
                send(res, json_body(req) ? query(req.matches[1], req.body) : bad_type);
              });
  server.Post(R"(/v1/oracles/([^/]+)/drift)",
              [=, this](const httplib::Request& req, httplib::Response& res) {
                send(res, json_body(req) ? drift(req.matches[1], req.body) : bad_type);
              });
  server.Post("/v1/whatif", [=, this](const httplib::Request& req, httplib::Response& res) {
    send(res, json_body(req) ? whatif(req.body) : bad_type);
  });
  server.Post("/v1/oracles", [this, send](const httplib::Request& req, httplib::Response& res) {
    if (!req.is_multipart_form_data() || !req.has_file("datacenters") || !req.has_file("latency")) {
      send(res, error(400, "invalid_request",
                      "multipart form with 'datacenters' and 'latency' parts is required"));
      return;
    }
    const auto config = req.has_file("config") ? req.get_file_value("config").content : "";
    send(res, build(req.get_file_value("datacenters").content,
                    req.get_file_value("latency").content, config));
  });
  server.set_exception_handler([send](const httplib::Request&, httplib::Response& res,
                                      std::exception_ptr ep) {
    std::string detail = "unknown error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      detail = e.what();
    } catch (...) {
    }
    send(res, error(500, "internal", detail));
  });
}

void serve_forever(Service& service, const std::string& host, int port) {
  httplib::Server server;
  service.mount(server);
  if (!server.listen(host, port))
    throw Error("cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace cloudoracle
