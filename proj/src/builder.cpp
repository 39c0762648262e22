#include "cloudoracle/builder.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>
#include <unordered_map>

#include "cloudoracle/errors.hpp"

namespace cloudoracle {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// First storage index i such that pair index k lies in row i of the (i < j) enumeration.
std::pair<std::size_t, std::size_t> pair_from_index(std::size_t k, std::size_t n) {
  std::size_t i = 0;
  std::size_t row_len = n - 1;
  while (k >= row_len) {
    k -= row_len;
    ++i;
    --row_len;
  }
  return {i, i + 1 + k};
}

enum class Order { LessEqual, GreaterEqual, Equal, Incomparable };

Order compare(std::span<const double> a, std::span<const double> b) {
  bool le = true;
  bool ge = true;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] < b[k]) {
      ge = false;
      if (!le) return Order::Incomparable;
    } else if (a[k] > b[k]) {
      le = false;
      if (!ge) return Order::Incomparable;
    }
  }
  if (le && ge) return Order::Equal;
  return le ? Order::LessEqual : Order::GreaterEqual;
}

}  // namespace

std::vector<Placement> enumerate_placements(const Catalog& catalog, const LatencyMatrix& latency,
                                            const BuildConfig& cfg) {
  if (!std::isfinite(cfg.min_dist_km) || cfg.min_dist_km < 0.0)
    throw InputError("min_dist_km must be finite and non-negative");
  const auto n = latency.num_storages();
  const auto num_clients = latency.num_clients();
  if (n < 2) throw InfeasibleTopology("infeasible topology: fewer than two storage data centers");

  std::unordered_map<std::string, const DataCenter*> by_id;
  for (const auto& dc : catalog) by_id.emplace(dc.id, &dc);
  std::vector<const DataCenter*> sites(n);
  for (std::size_t d = 0; d < n; ++d) {
    auto it = by_id.find(latency.storages()[d]);
    if (it == by_id.end())
      throw InputError("storage '" + latency.storages()[d] + "' missing from catalog");
    sites[d] = it->second;
  }

  // Storage-major copy so each pair reads two contiguous columns.
  std::vector<double> cols(n * num_clients);
  for (std::size_t c = 0; c < num_clients; ++c)
    for (std::size_t d = 0; d < n; ++d) cols[d * num_clients + c] = latency.at(c, d);

  const std::size_t total = n * (n - 1) / 2;
  const std::size_t chunks = std::clamp<std::size_t>(cfg.parallel_chunks, 1, total);
  std::vector<std::vector<Placement>> parts(chunks);

  auto run_range = [&](std::size_t chunk) {
    const std::size_t begin = total * chunk / chunks;
    const std::size_t end = total * (chunk + 1) / chunks;
    if (begin == end) return;
    auto [i, j] = pair_from_index(begin, n);
    auto& out = parts[chunk];
    out.reserve(end - begin);
    for (std::size_t k = begin; k < end; ++k) {
      if (haversine_km(*sites[i], *sites[j]) >= cfg.min_dist_km) {
        Placement p;
        p.pair.ids = {latency.storages()[i], latency.storages()[j]};
        p.pair.storage_index = {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)};
        p.coeffs.resize(2 * num_clients);
        const double* ci = cols.data() + i * num_clients;
        const double* cj = cols.data() + j * num_clients;
        for (std::size_t c = 0; c < num_clients; ++c) {
          p.coeffs[c] = std::max(ci[c], cj[c]);
          p.coeffs[num_clients + c] = std::min(ci[c], cj[c]);
        }
        out.push_back(std::move(p));
      }
      if (++j == n) {
        ++i;
        j = i + 1;
      }
    }
  };

  if (chunks == 1) {
    run_range(0);
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) workers.emplace_back(run_range, c);
  }

  std::vector<Placement> placements;
  if (chunks == 1) {
    placements = std::move(parts[0]);
  } else {
    std::size_t count = 0;
    for (const auto& part : parts) count += part.size();
    placements.reserve(count);
    for (auto& part : parts)
      std::move(part.begin(), part.end(), std::back_inserter(placements));
  }
  if (placements.empty())
    throw InfeasibleTopology("infeasible topology: no storage pair is at least " +
                             std::to_string(cfg.min_dist_km) + " km apart");
  return placements;
}

PruneResult prune_dominated(std::vector<Placement> placements) {
  // Block-nested-loop skyline: compare each candidate only against the
  // survivors so far. Weak dominance is transitive, so this matches the
  // all-pairs definition.
  std::vector<std::size_t> window;
  std::vector<char> alive(placements.size(), 0);
  for (std::size_t p = 0; p < placements.size(); ++p) {
    const auto& cand = placements[p].coeffs;
    bool dominated = false;
    for (std::size_t q : window) {
      const auto ord = compare(placements[q].coeffs, cand);
      if (ord == Order::LessEqual || ord == Order::Equal) {
        dominated = true;
        break;
      }
    }
    if (dominated) continue;
    std::erase_if(window, [&](std::size_t q) {
      if (compare(cand, placements[q].coeffs) == Order::LessEqual) {
        alive[q] = 0;
        return true;
      }
      return false;
    });
    window.push_back(p);
    alive[p] = 1;
  }

  PruneResult result;
  result.retained.reserve(window.size());
  for (std::size_t p = 0; p < placements.size(); ++p) {
    if (alive[p]) result.retained.push_back(std::move(placements[p]));
  }
  result.pruned = placements.size() - result.retained.size();
  return result;
}

Oracle build_plane_matrix(const std::vector<Placement>& placements,
                          const std::vector<std::string>& clients) {
  if (placements.empty()) throw ConstructionError("no placements to build an oracle from");
  const std::size_t cols = 2 * clients.size() + 1;
  std::vector<double> raw;
  raw.reserve(placements.size() * cols);
  std::vector<PlacementPair> pairs;
  pairs.reserve(placements.size());
  for (const auto& p : placements) {
    if (p.coeffs.size() != cols - 1)
      throw DimensionMismatch("placement coefficient count does not match client count");
    raw.insert(raw.end(), p.coeffs.begin(), p.coeffs.end());
    raw.push_back(-1.0);
    pairs.push_back(p.pair);
  }
  return Oracle(clients, std::move(pairs), std::move(raw));
}

std::pair<Oracle, BuildReport> build_oracle(const Catalog& catalog, const LatencyMatrix& latency,
                                            const BuildConfig& cfg) {
  BuildReport report;

  auto t0 = Clock::now();
  auto placements = enumerate_placements(catalog, latency, cfg);
  report.enumerate_seconds = seconds_since(t0);
  report.candidates_enumerated = placements.size();

  t0 = Clock::now();
  if (cfg.prune) {
    auto pruned = prune_dominated(std::move(placements));
    placements = std::move(pruned.retained);
    report.pruned = pruned.pruned;
  }
  report.prune_seconds = seconds_since(t0);
  report.retained = placements.size();

  t0 = Clock::now();
  Oracle oracle = build_plane_matrix(placements, latency.clients());
  report.matrix_seconds = seconds_since(t0);

  return {std::move(oracle).with_build_info(BuildInfo{cfg, report}), report};
}

}  // namespace cloudoracle
