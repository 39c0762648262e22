#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cloudoracle/model.hpp"

namespace cloudoracle {

/// Threshold on 1 - alpha^2 (and on |v . n|) below which two planes count as parallel.
inline constexpr double kParallelEpsilon = 1e-12;

struct MinResult {
  std::size_t placement_index = 0;
  Placement placement;
  double cost = 0.0;
};

/// Index and cost of the cheapest plane at parameter vector `params`, lowest index on ties.
/// No sign check on `params`; drift scans evaluate outside the feasible orthant.
std::pair<std::size_t, double> argmin_plane(const Oracle& oracle, std::span<const double> params);

/// Vertical ray-shooting from the floor [a, 0]: one matrix-vector product and an argmin.
MinResult query_minimum(const Oracle& oracle, const Workload& workload);

enum class DriftMode {
  Lifted,     // motion [d, l_p . d], stays on the current plane
  Projected,  // [d, 0] orthogonally projected onto the current unit plane
};

struct DriftVector {
  std::vector<double> direction;

  /// Throws InputError on non-finite or all-zero input.
  static DriftVector make(std::vector<double> direction);
};

struct DriftResult {
  std::size_t current_index = 0;
  double current_cost = 0.0;
  std::optional<std::size_t> next_index;  // empty when no crossing exists
  std::vector<double> param_next;
  double cost_next = 0.0;
  double distance = 0.0;

  bool unbounded() const { return !next_index.has_value(); }
};

/// t = -(start . plane) / (direction . plane), or +infinity when the ray runs parallel.
double ray_intersection_distance(std::span<const double> start, std::span<const double> direction,
                                 std::span<const double> plane);

struct TangentPair {
  std::vector<double> plus;
  std::vector<double> minus;
};

/// Unit directions inside the plane with normal n0 that reach the plane with
/// normal ni fastest: +/-(alpha n0 - ni) / sqrt(1 - alpha^2), alpha = ni . n0.
/// Empty when the planes are parallel.
std::optional<TangentPair> tangent_direction(std::span<const double> n0,
                                             std::span<const double> ni);

/// First plane hit when the parameters move along `drift` from `workload`.
/// `distance` is arc length along the motion in parameter x cost space.
DriftResult query_drift_directed(const Oracle& oracle, const Workload& workload,
                                 const DriftVector& drift, DriftMode mode = DriftMode::Lifted);

/// Least movement within the current plane, over all directions, that reaches
/// another plane. Unbounded for single-plane oracles or when every plane is parallel.
DriftResult query_drift_undirected(const Oracle& oracle, const Workload& workload);

}  // namespace cloudoracle
