#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "cloudoracle/model.hpp"

namespace cloudoracle {

struct BaselineResult {
  std::array<std::string, 2> pair;
  double cost = 0.0;
  std::size_t pairs_evaluated = 0;
  double wall_seconds = 0.0;
};

/// Exact minimizer of the placement cost over every storage pair at least
/// `min_dist_km` apart, evaluated from scratch for this one workload. Ties go
/// to the pair enumerated first (lowest storage indices). Throws InfeasibleTopology.
BaselineResult solve_exhaustive(const Catalog& catalog, const LatencyMatrix& latency,
                                const Workload& workload, double min_dist_km = 200.0);

}  // namespace cloudoracle
