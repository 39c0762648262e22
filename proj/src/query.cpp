#include "cloudoracle/query.hpp"

#include <cmath>
#include <limits>

#include "cloudoracle/errors.hpp"

namespace cloudoracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_dims(const Oracle& oracle, std::size_t num_params) {
  if (num_params != oracle.num_params())
    throw DimensionMismatch("workload has " + std::to_string(num_params) +
                            " parameters, oracle expects " + std::to_string(oracle.num_params()));
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double intersect(std::span<const double> start, std::span<const double> direction,
                 std::span<const double> plane) {
  const double denom = dot(direction, plane);
  if (std::abs(denom) < kParallelEpsilon) return kInf;
  return -dot(start, plane) / denom;
}

std::vector<double> start_point(std::span<const double> params, double cost) {
  std::vector<double> s(params.begin(), params.end());
  s.push_back(cost);
  return s;
}

DriftResult finish(const Oracle& oracle, std::size_t current, double current_cost,
                   std::span<const double> start, std::span<const double> direction,
                   std::optional<std::size_t> next, double t) {
  DriftResult out;
  out.current_index = current;
  out.current_cost = current_cost;
  if (!next) {
    out.cost_next = kInf;
    out.distance = kInf;
    return out;
  }
  out.next_index = next;
  out.distance = t;
  const auto n = oracle.num_params();
  out.param_next.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.param_next[k] = start[k] + direction[k] * t;
  out.cost_next = start[n] + direction[n] * t;
  return out;
}

}  // namespace

std::pair<std::size_t, double> argmin_plane(const Oracle& oracle, std::span<const double> params) {
  check_dims(oracle, params.size());
  const std::size_t rows = oracle.size();
  const std::size_t cols = oracle.dims();
  const std::size_t n = params.size();
  const double* m = oracle.raw_planes().data();
  const double* a = params.data();

  std::size_t best = 0;
  double best_cost = kInf;
  std::size_t p = 0;
  // Four rows at a time; each row still accumulates strictly left to right,
  // so every cost is bit-identical to dot(coeffs, params).
  for (; p + 4 <= rows; p += 4) {
    const double* r0 = m + p * cols;
    const double* r1 = r0 + cols;
    const double* r2 = r1 + cols;
    const double* r3 = r2 + cols;
    double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double x = a[k];
      c0 += r0[k] * x;
      c1 += r1[k] * x;
      c2 += r2[k] * x;
      c3 += r3[k] * x;
    }
    if (c0 < best_cost) best_cost = c0, best = p;
    if (c1 < best_cost) best_cost = c1, best = p + 1;
    if (c2 < best_cost) best_cost = c2, best = p + 2;
    if (c3 < best_cost) best_cost = c3, best = p + 3;
  }
  for (; p < rows; ++p) {
    const double c = dot({m + p * cols, n}, params);
    if (c < best_cost) best_cost = c, best = p;
  }
  // All-NaN or all-inf inputs leave best at 0; report the real cost of row 0.
  if (!(best_cost < kInf)) best_cost = dot(oracle.coeffs(best), params);
  return {best, best_cost};
}

MinResult query_minimum(const Oracle& oracle, const Workload& workload) {
  check_dims(oracle, workload.w.size() + workload.r.size());
  const auto params = workload.params();
  auto [idx, cost] = argmin_plane(oracle, params);
  return MinResult{idx, oracle.placement(idx), cost};
}

DriftVector DriftVector::make(std::vector<double> direction) {
  bool nonzero = false;
  for (double x : direction) {
    if (!std::isfinite(x)) throw InputError("drift direction must be finite");
    if (x != 0.0) nonzero = true;
  }
  if (!nonzero) throw InputError("drift direction must not be all zero");
  return DriftVector{std::move(direction)};
}

double ray_intersection_distance(std::span<const double> start, std::span<const double> direction,
                                 std::span<const double> plane) {
  if (start.size() != plane.size() || direction.size() != plane.size())
    throw DimensionMismatch("ray and plane dimensions differ");
  if (std::abs(norm2(direction) - 1.0) > 1e-9)
    throw InputError("ray direction must be a unit vector");
  return intersect(start, direction, plane);
}

std::optional<TangentPair> tangent_direction(std::span<const double> n0,
                                             std::span<const double> ni) {
  if (n0.size() != ni.size()) throw DimensionMismatch("plane normals differ in dimension");
  const double alpha = dot(ni, n0);
  const double gap = 1.0 - alpha * alpha;
  if (gap < kParallelEpsilon) return std::nullopt;
  const double scale = 1.0 / std::sqrt(gap);
  TangentPair out;
  out.plus.resize(n0.size());
  out.minus.resize(n0.size());
  for (std::size_t k = 0; k < n0.size(); ++k) {
    const double v = (alpha * n0[k] - ni[k]) * scale;
    out.plus[k] = v;
    out.minus[k] = -v;
  }
  return out;
}

DriftResult query_drift_directed(const Oracle& oracle, const Workload& workload,
                                 const DriftVector& drift, DriftMode mode) {
  check_dims(oracle, workload.w.size() + workload.r.size());
  check_dims(oracle, drift.direction.size());
  const auto params = workload.params();
  const auto [current, cost] = argmin_plane(oracle, params);
  const auto start = start_point(params, cost);
  const auto n0 = oracle.unit_row(current);
  const std::size_t dims = oracle.dims();

  std::vector<double> motion(drift.direction.begin(), drift.direction.end());
  if (mode == DriftMode::Lifted) {
    motion.push_back(dot(oracle.coeffs(current), drift.direction));
  } else {
    motion.push_back(0.0);
    const double along = dot(motion, n0);
    for (std::size_t k = 0; k < dims; ++k) motion[k] -= along * n0[k];
  }
  const double len = norm2(motion);
  const double scale = std::max(1.0, norm2(drift.direction));
  if (!(len > 1e-12 * scale)) throw DegenerateDrift("drift motion vector vanishes on the current plane");
  for (auto& x : motion) x /= len;

  std::optional<std::size_t> next;
  double best = kInf;
  for (std::size_t p = 0; p < oracle.size(); ++p) {
    if (p == current) continue;
    const auto ni = oracle.unit_row(p);
    const double denom = dot(motion, ni);
    // Only planes the motion heads into; the start is on or below every other plane.
    if (denom > -kParallelEpsilon) continue;
    const double t = std::max(0.0, -dot(start, ni) / denom);
    if (t < best) {
      best = t;
      next = p;
    }
  }
  return finish(oracle, current, cost, start, motion, next, best);
}

DriftResult query_drift_undirected(const Oracle& oracle, const Workload& workload) {
  check_dims(oracle, workload.w.size() + workload.r.size());
  const auto params = workload.params();
  const auto [current, cost] = argmin_plane(oracle, params);
  const auto start = start_point(params, cost);
  const auto n0 = oracle.unit_row(current);

  std::optional<std::size_t> next;
  std::vector<double> best_dir;
  double best = kInf;
  for (std::size_t p = 0; p < oracle.size(); ++p) {
    if (p == current) continue;
    const auto ni = oracle.unit_row(p);
    auto tangents = tangent_direction(n0, ni);
    if (!tangents) continue;
    for (auto* v : {&tangents->plus, &tangents->minus}) {
      const double t = intersect(start, *v, ni);
      if (t >= 0.0 && t < best) {
        best = t;
        next = p;
        best_dir = *v;
      }
    }
  }
  return finish(oracle, current, cost, start, best_dir, next, best);
}

}  // namespace cloudoracle
