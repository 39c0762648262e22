#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cloudoracle/model.hpp"

namespace cloudoracle {

/// One placement per unordered storage pair at least cfg.min_dist_km apart,
/// in (i < j) row-major order over latency.storages(). Throws InfeasibleTopology
/// when fewer than two storage sites exist or no pair is far enough apart.
std::vector<Placement> enumerate_placements(const Catalog& catalog, const LatencyMatrix& latency,
                                            const BuildConfig& cfg);

struct PruneResult {
  std::vector<Placement> retained;
  std::size_t pruned = 0;
};

/// Drops every placement whose coefficients are element-wise >= another's with
/// at least one strict coordinate, plus later duplicates of identical vectors.
/// Survivors keep their enumeration order.
PruneResult prune_dominated(std::vector<Placement> placements);

Oracle build_plane_matrix(const std::vector<Placement>& placements,
                          const std::vector<std::string>& clients);

std::pair<Oracle, BuildReport> build_oracle(const Catalog& catalog, const LatencyMatrix& latency,
                                            const BuildConfig& cfg = {});

}  // namespace cloudoracle
