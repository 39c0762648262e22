#include "cloudoracle/baseline.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <unordered_map>

#include "cloudoracle/errors.hpp"

namespace cloudoracle {

BaselineResult solve_exhaustive(const Catalog& catalog, const LatencyMatrix& latency,
                                const Workload& workload, double min_dist_km) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto n = latency.num_storages();
  const auto num_clients = latency.num_clients();
  if (workload.w.size() != num_clients || workload.r.size() != num_clients)
    throw DimensionMismatch("workload has " + std::to_string(workload.w.size()) +
                            " clients, topology has " + std::to_string(num_clients));

  std::unordered_map<std::string, const DataCenter*> by_id;
  for (const auto& dc : catalog) by_id.emplace(dc.id, &dc);
  std::vector<const DataCenter*> sites(n);
  for (std::size_t d = 0; d < n; ++d) {
    auto it = by_id.find(latency.storages()[d]);
    if (it == by_id.end())
      throw InputError("storage '" + latency.storages()[d] + "' missing from catalog");
    sites[d] = it->second;
  }

  BaselineResult best;
  best.cost = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (haversine_km(*sites[i], *sites[j]) < min_dist_km) continue;
      ++best.pairs_evaluated;
      // Same term order as the oracle rows: all writes, then all reads.
      double cost = 0.0;
      for (std::size_t c = 0; c < num_clients; ++c)
        cost += std::max(latency.at(c, i), latency.at(c, j)) * workload.w[c];
      for (std::size_t c = 0; c < num_clients; ++c)
        cost += std::min(latency.at(c, i), latency.at(c, j)) * workload.r[c];
      if (!found || cost < best.cost) {
        found = true;
        best.cost = cost;
        best.pair = {latency.storages()[i], latency.storages()[j]};
      }
    }
  }
  if (!found) throw InfeasibleTopology("infeasible topology: no feasible storage pair");
  best.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return best;
}

}  // namespace cloudoracle
