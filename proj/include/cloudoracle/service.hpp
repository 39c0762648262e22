#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "cloudoracle/model.hpp"

namespace httplib {
class Server;
}

namespace cloudoracle {

/// Thread-safe id -> oracle map. Entries are immutable and published atomically;
/// readers hold a shared_ptr, so a lookup never blocks on a running query.
class OracleRegistry {
 public:
  /// Returns false when `id` is already taken.
  bool add(const std::string& id, std::shared_ptr<const Oracle> oracle);
  std::shared_ptr<const Oracle> find(const std::string& id) const;
  std::vector<std::string> ids() const;

  bool add_trace(const std::string& id, std::string csv_text);
  std::optional<std::string> trace(const std::string& id) const;

  /// Registers every "<id>.oracle" as an oracle and every "<id>.csv" as a trace.
  /// Returns the number of oracles loaded.
  std::size_t load_directory(const std::filesystem::path& dir);

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const Oracle>> oracles_;
  std::map<std::string, std::string> traces_;
};

struct ApiResponse {
  int status = 200;
  std::string body;
};

struct ServiceConfig {
  std::size_t max_build_storages = 400;
  std::size_t max_whatif_samples = 1'000'000;
  std::size_t worker_chunks = 1;
};

/// JSON-over-HTTP facade. Each handler is callable directly; mount() wires
/// them to /v1 routes on an httplib server.
class Service {
 public:
  explicit Service(ServiceConfig config = {});

  OracleRegistry& registry() { return registry_; }
  const OracleRegistry& registry() const { return registry_; }

  ApiResponse list_oracles() const;
  ApiResponse get_oracle(const std::string& id) const;
  ApiResponse query(const std::string& id, const std::string& body) const;
  ApiResponse drift(const std::string& id, const std::string& body) const;
  ApiResponse whatif(const std::string& body) const;
  /// `config_json` may be empty; it accepts "id", "min_dist_km", "prune", "parallel_chunks".
  ApiResponse build(const std::string& datacenters_json, const std::string& latency_csv,
                    const std::string& config_json);

  void mount(httplib::Server& server);

 private:
  ServiceConfig config_;
  OracleRegistry registry_;
};

/// Blocks serving `service` on host:port until the process is stopped.
void serve_forever(Service& service, const std::string& host, int port);

}  // namespace cloudoracle
